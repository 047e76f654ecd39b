"""Eigenvalue-register emulator: every stage against closed forms.

The end-to-end oracles are hand-computed: for A = diag(1, 2), b = (3, 4)
at precision "2.2" the embedded spectrum weights are 9/25 on |lambda| = 1
and 16/25 on |lambda| = 2, so the ancilla success weight is exactly
0.36 * 0.25**2 + 0.64 * 0.125**2 = 0.0325; the identity gives 0.25**2.
"""

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import random_embedded
from qcfd.errors import ConfigError, SolverError
from qcfd.hhl.inversion import apply_eigeninversion
from qcfd.hhl.loader import load_amplitudes, rotation_angles
from qcfd.hhl.metrics import error_norms, fidelity
from qcfd.hhl.precision import Precision
from qcfd.hhl.qpe import (apply_qpe, apply_qpe_inverse, clock_marginals,
                          hadamard_clock)
from qcfd.hhl.solver import HhlConfig, HhlResult, hhl_solve
from qcfd.hhl.state import StateVector
from qcfd.hhl.trotter import build_trotter_unitary, exact_unitary
from qcfd.lcu.clusters import symmetrize
from qcfd.lcu.decompose import decompose_hadamard, filter_by_coefficient
from qcfd.sparse import SparseMatrix


# ---------------------------------------------------------------------------
# precision register


def test_precision_parse_and_layout():
    spec = Precision.parse("3.4")
    assert (spec.integer_bits, spec.fraction_bits) == (3, 4)
    assert spec.n_clock == 8
    assert spec.resolution == 2.0**-4
    assert spec.evolution_time == pytest.approx(2.0 * np.pi / 16, abs=1e-15)
    assert spec.min_value == -8.0
    assert spec.max_value == 8.0 - 2.0**-4
    assert spec.default_rotation_constant == spec.resolution
    assert str(spec) == "3.4"
    assert Precision.parse(str(spec)) == spec


def test_precision_zero_integer_bits_is_legal():
    spec = Precision(0, 4)
    assert spec.n_clock == 5
    assert spec.max_value == 1.0 - 2.0**-4
    assert spec.min_value == -1.0


@pytest.mark.parametrize("text", ["34", "3.", ".4", "-1.2", "a.b", "3.4.5"])
def test_precision_parse_rejects_malformed(text):
    with pytest.raises(ConfigError):
        Precision.parse(text)


def test_precision_bounds_are_enforced():
    with pytest.raises(ConfigError):
        Precision(-1, 4)
    with pytest.raises(ConfigError):
        Precision(3, 0)
    with pytest.raises(ConfigError):
        Precision(10, 10)          # 21 clock qubits


@given(st.integers(0, 6), st.integers(1, 8), st.data())
@settings(deadline=None, max_examples=100)
def test_precision_code_value_round_trip(m, f, data):
    spec = Precision(m, f)
    code = data.draw(st.integers(0, (1 << spec.n_clock) - 1))
    value = spec.value_of(code)
    assert spec.min_value <= value <= spec.max_value
    assert spec.code_of(value) == code


def test_precision_code_of_wraps_like_phase_estimation():
    spec = Precision(2, 2)         # range [-4, 3.75], 32 codes
    assert spec.code_of(4.0) == spec.code_of(-4.0)
    assert spec.value_of(spec.code_of(4.0)) == -4.0
    with pytest.raises(ConfigError):
        spec.value_of(32)
    with pytest.raises(ConfigError):
        spec.value_of(-1)


def test_precision_negative_values_use_twos_complement():
    spec = Precision(2, 2)
    assert spec.code_of(-1.0) == 28
    assert spec.value_of(28) == -1.0
    assert spec.code_of(1.0) == 4
    assert spec.value_of(0) == 0.0


# ---------------------------------------------------------------------------
# state vector


def test_state_starts_in_ground_state():
    state = StateVector(2, 3)
    assert state.amps.shape == (1 << 6,)
    assert state.amps[0] == 1.0
    assert np.count_nonzero(state.amps) == 1
    assert state.norm() == 1.0
    assert state.grid.shape == (2, 8, 4)


def test_state_grid_shares_the_buffer():
    state = StateVector(1, 1)
    state.grid[1, 0, 1] = 0.5j
    index = 1 + (0 << 1) + (1 << 2)
    assert state.amps[index] == 0.5j
    assert state.ancilla_one_probability() == pytest.approx(0.25, abs=1e-15)


def test_state_rejects_wrong_buffer_length():
    with pytest.raises(ValueError):
        StateVector(2, 2, np.zeros(7, dtype=np.complex128))


# ---------------------------------------------------------------------------
# amplitude loader


@given(st.integers(0, 6), st.integers(0, 2**31 - 1))
@settings(deadline=None, max_examples=60)
def test_loader_reproduces_normalized_target(n, seed):
    target = np.random.default_rng(seed).standard_normal(1 << n)
    assume(np.linalg.norm(target) > 1e-9)
    amps = load_amplitudes(target)
    assert np.linalg.norm(amps) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(amps, target / np.linalg.norm(target),
                               rtol=0, atol=1e-12)


def test_loader_angle_tree_shape():
    levels = rotation_angles(np.ones(8))
    assert [level.size for level in levels] == [1, 2, 4]


def test_loader_restores_signs():
    target = np.array([0.5, -0.5, -0.5, 0.5])
    np.testing.assert_allclose(load_amplitudes(target), target,
                               rtol=0, atol=1e-15)


def test_loader_rejects_zero_and_odd_sizes():
    with pytest.raises(SolverError):
        load_amplitudes(np.zeros(4))
    with pytest.raises(SolverError):
        rotation_angles(np.ones(3))


# ---------------------------------------------------------------------------
# metrics


@given(st.integers(2, 64), st.integers(0, 2**31 - 1))
@settings(deadline=None, max_examples=60)
def test_l2_matches_fidelity_closed_form(n, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal(n), rng.standard_normal(n)
    assume(np.linalg.norm(a) > 1e-9 and np.linalg.norm(b) > 1e-9)
    f = fidelity(a, b)
    l2, rms = error_norms(a, b)
    assert l2 == pytest.approx(np.sqrt(max(2.0 - 2.0 * f, 0.0)), abs=1e-9)
    assert rms == pytest.approx(l2 / np.sqrt(n), abs=1e-12)


def test_fidelity_is_scale_and_sign_invariant():
    a = np.array([1.0, 2.0, 3.0])
    assert fidelity(a, a) == pytest.approx(1.0, abs=1e-15)
    assert fidelity(a, -2.5 * a) == pytest.approx(1.0, abs=1e-15)
    assert error_norms(a, -a) == (pytest.approx(0.0, abs=1e-15),
                                  pytest.approx(0.0, abs=1e-15))


def test_metrics_reject_zero_vectors():
    with pytest.raises(SolverError):
        fidelity(np.zeros(3), np.ones(3))
    with pytest.raises(SolverError):
        error_norms(np.ones(3), np.zeros(3))


# ---------------------------------------------------------------------------
# evolution operators


def test_exact_unitary_on_diagonal_matrix():
    matrix = SparseMatrix.from_dense(np.diag([1.0, -2.0]), keep_zeros=False)
    out = exact_unitary(matrix, 0.3)
    np.testing.assert_allclose(out, np.diag(np.exp(1j * np.array([0.3, -0.6]))),
                               rtol=0, atol=1e-14)


def test_exact_unitary_requires_symmetry():
    m = SparseMatrix.from_coo(2, [0, 1], [1, 0], [1.0, 2.0])
    with pytest.raises(SolverError):
        exact_unitary(m, 0.1)


def test_trotter_single_string_is_exact():
    matrix = SparseMatrix.from_dense(0.7 * np.array([[0.0, 1.0], [1.0, 0.0]]))
    template = decompose_hadamard(matrix)
    assert template.nonzero_count == 1
    for steps in (1, 3):
        np.testing.assert_allclose(
            build_trotter_unitary(template, 0.9, steps),
            exact_unitary(matrix, 0.9), rtol=0, atol=1e-13)


@given(st.integers(1, 4), st.integers(0, 2**31 - 1), st.integers(1, 8))
@settings(deadline=None, max_examples=30)
def test_trotter_output_is_unitary(n, seed, steps):
    matrix = random_embedded(np.random.default_rng(seed), n)
    template = decompose_hadamard(matrix)
    u = build_trotter_unitary(template, 0.5, steps)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(matrix.n),
                               rtol=0, atol=1e-12)


def test_trotter_error_shrinks_with_more_steps(embedded5, template5):
    exact = exact_unitary(embedded5, 0.4)
    err = [np.abs(build_trotter_unitary(template5, 0.4, r) - exact).max()
           for r in (1, 4)]
    assert err[1] < err[0] / 2.0


def test_trotter_coefficient_limit_equals_prefiltered_template(template5):
    direct = build_trotter_unitary(template5, 0.3, 2, coefficient_limit=5e-2)
    filtered = build_trotter_unitary(filter_by_coefficient(template5, 5e-2),
                                     0.3, 2)
    np.testing.assert_array_equal(direct, filtered)
    assert not np.allclose(direct, build_trotter_unitary(template5, 0.3, 2),
                           atol=1e-6)


def test_trotter_rejects_zero_steps(template5):
    with pytest.raises(SolverError):
        build_trotter_unitary(template5, 0.1, 0)


# ---------------------------------------------------------------------------
# phase estimation


def test_qpe_decodes_every_code_exactly():
    for k in range(64):
        state = StateVector(0, 6)
        unitary = np.array([[np.exp(2j * np.pi * k / 64)]])
        apply_qpe(state, unitary)
        marginals = clock_marginals(state)
        assert marginals[k] == pytest.approx(1.0, abs=1e-12), f"code {k}"
        assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_qpe_inverse_restores_the_state():
    rng = np.random.default_rng(7)
    matrix = random_embedded(rng, 3)
    unitary = exact_unitary(matrix, 0.7)
    state = StateVector(3, 5)
    state.grid[0, 0, :] = load_amplitudes(rng.standard_normal(8))
    before = state.amps.copy()
    apply_qpe(state, unitary)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)
    apply_qpe_inverse(state, unitary)
    np.testing.assert_allclose(state.amps, before, rtol=0, atol=1e-10)


def test_hadamard_clock_spreads_uniformly():
    state = StateVector(1, 4)
    state.grid[0, 0, 0] = 1.0
    hadamard_clock(state)
    np.testing.assert_allclose(clock_marginals(state), np.full(16, 1 / 16),
                               rtol=0, atol=1e-14)


# ---------------------------------------------------------------------------
# conditioned rotation


def _spread_state(n_input: int, spec: Precision) -> StateVector:
    state = StateVector(n_input, spec.n_clock)
    state.grid[0, 0, 0] = 1.0
    hadamard_clock(state)
    return state


def test_inversion_rotates_every_nonzero_code():
    spec = Precision(2, 2)
    state = _spread_state(1, spec)
    count = apply_eigeninversion(state, spec, spec.resolution)
    assert count == (1 << spec.n_clock) - 1
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_inversion_prune_thresholds_by_clock_marginal():
    spec = Precision(2, 2)
    state = _spread_state(1, spec)            # every marginal is 1/32
    assert apply_eigeninversion(state, spec, spec.resolution,
                                prune_limit=2.0) == 0
    concentrated = StateVector(1, spec.n_clock)
    concentrated.grid[0, 5, 0] = 1.0
    assert apply_eigeninversion(concentrated, spec, spec.resolution,
                                prune_limit=0.5) == 1


def test_inversion_writes_c_over_lambda_with_sign():
    spec = Precision(2, 2)
    state = StateVector(0, spec.n_clock)
    code_pos, code_neg = spec.code_of(1.0), spec.code_of(-1.0)
    state.grid[0, code_pos, 0] = np.sqrt(0.5)
    state.grid[0, code_neg, 0] = np.sqrt(0.5)
    apply_eigeninversion(state, spec, 0.25)
    amp_pos = state.grid[1, code_pos, 0]
    amp_neg = state.grid[1, code_neg, 0]
    assert amp_pos == pytest.approx(np.sqrt(0.5) * 0.25, abs=1e-15)
    assert amp_neg == pytest.approx(-np.sqrt(0.5) * 0.25, abs=1e-15)


def test_inversion_rejects_bad_rotation_constants():
    spec = Precision(2, 2)
    state = _spread_state(0, spec)
    with pytest.raises(SolverError):
        apply_eigeninversion(state, spec, 0.0)
    with pytest.raises(SolverError):
        apply_eigeninversion(state, spec, -0.1)
    with pytest.raises(SolverError):
        apply_eigeninversion(state, spec, spec.resolution * 1.001)


# ---------------------------------------------------------------------------
# solver configuration


def test_config_defaults_are_valid():
    config = HhlConfig()
    assert config.precision_spec.n_clock == 8
    assert config.rotation_constant is None


@pytest.mark.parametrize("kwargs", [
    {"evolution": "magic"},
    {"trotter_steps": 0},
    {"prune_limit": -1e-3},
    {"coefficient_limit": -1.0},
    {"precision": "bad"},
    {"precision": "12.12"},
    {"rotation_constant": 0.0},
    {"rotation_constant": -0.5},
    {"rotation_constant": 0.25, "precision": "3.4"},  # above 2**-4
])
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ConfigError):
        HhlConfig(**kwargs)


def test_config_accepts_rotation_constant_at_resolution():
    config = HhlConfig(precision="3.4", rotation_constant=2.0**-4)
    assert config.rotation_constant == 2.0**-4


# ---------------------------------------------------------------------------
# end-to-end closed forms


@pytest.fixture(scope="module")
def identity_run():
    matrix = SparseMatrix.from_dense(np.eye(2), keep_zeros=False)
    return hhl_solve(matrix, np.array([3.0, 4.0]),
                     HhlConfig(precision="2.2", evolution="exact"),
                     reference=np.array([3.0, 4.0]))


def test_identity_solution_is_recovered(identity_run):
    np.testing.assert_allclose(identity_run.x, [3.0, 4.0],
                               rtol=0, atol=1e-10)
    assert identity_run.fidelity >= 1.0 - 1e-9
    assert identity_run.l2 <= 1e-12


def test_identity_success_weight_is_exact(identity_run):
    assert identity_run.success_probability == pytest.approx(
        0.0625, abs=1e-12)
    assert identity_run.rotations == 31
    assert identity_run.n_clock == 5


def test_identity_marginals_sit_on_plus_minus_one(identity_run):
    spec = Precision(2, 2)
    marginals = identity_run.marginals
    assert marginals[spec.code_of(1.0)] == pytest.approx(0.5, abs=1e-12)
    assert marginals[spec.code_of(-1.0)] == pytest.approx(0.5, abs=1e-12)


def test_diag_solution_and_success_weight():
    matrix = SparseMatrix.from_dense(np.diag([1.0, 2.0]), keep_zeros=False)
    result = hhl_solve(matrix, np.array([3.0, 4.0]),
                       HhlConfig(precision="2.2", evolution="exact"),
                       reference=np.array([3.0, 2.0]))
    np.testing.assert_allclose(result.x, [3.0, 2.0], rtol=0, atol=1e-10)
    assert result.fidelity >= 1.0 - 1e-9
    assert result.success_probability == pytest.approx(0.0325, abs=1e-12)
    spec = Precision(2, 2)
    assert result.marginals[spec.code_of(1.0)] == pytest.approx(
        0.5 * 9 / 25, abs=1e-12)
    assert result.marginals[spec.code_of(2.0)] == pytest.approx(
        0.5 * 16 / 25, abs=1e-12)


def test_trotter_evolution_reaches_the_same_solution():
    matrix = SparseMatrix.from_dense(np.diag([1.0, 2.0]), keep_zeros=False)
    result = hhl_solve(matrix, np.array([3.0, 4.0]),
                       HhlConfig(precision="2.2", trotter_steps=256),
                       reference=np.array([3.0, 2.0]))
    assert result.fidelity >= 1.0 - 1e-6


def test_solver_accepts_prepared_template(sample5, embedded5, template5):
    config = HhlConfig(precision="3.4", evolution="exact")
    result = hhl_solve(sample5.matrix, sample5.rhs, config,
                       template=template5)
    assert result.template is template5
    assert result.x.shape == (16,)


# ---------------------------------------------------------------------------
# solver error paths


def test_solver_rejects_bad_rhs():
    matrix = SparseMatrix.from_dense(np.eye(2))
    config = HhlConfig(precision="2.2", evolution="exact")
    with pytest.raises(SolverError):
        hhl_solve(matrix, np.zeros(2), config)
    with pytest.raises(SolverError):
        hhl_solve(matrix, np.ones(3), config)


def test_solver_rejects_mismatched_template(template5):
    matrix = SparseMatrix.from_dense(np.eye(2))
    config = HhlConfig(precision="2.2", evolution="exact")
    with pytest.raises(SolverError):
        hhl_solve(matrix, np.ones(2), config, template=template5)


def test_preflight_rejects_unrepresentable_spectrum():
    matrix = SparseMatrix.from_dense(np.diag([1.0, 2.0]))
    config = HhlConfig(precision="1.2", evolution="exact",
                       preflight_spectrum=True)
    with pytest.raises(SolverError):
        hhl_solve(matrix, np.array([3.0, 4.0]), config)
    ok = HhlConfig(precision="2.2", evolution="exact",
                   preflight_spectrum=True)
    result = hhl_solve(matrix, np.array([3.0, 4.0]), ok)
    assert isinstance(result, HhlResult)

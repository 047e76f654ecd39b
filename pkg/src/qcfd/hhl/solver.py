"""End-to-end emulated eigenvalue-inversion linear solve.

Pipeline for A x = b with A real (not necessarily symmetric):

1. embed A into the symmetric H = [[0, A], [A^T, 0]] and b into (b, 0);
2. load the normalized right-hand side into the input register;
3. phase-estimate exp(i H t) into the clock register (product-formula or
   eigendecomposition evolution);
4. rotate the ancilla by arcsin(C / lambda~) per decoded eigenvalue;
5. uncompute the estimation and read the ancilla-1, clock-0 block, whose
   normalized content approximates H^-1 b up to scale ||b|| sqrt(E) / C;
6. the bottom half of the embedded solution is x.

Everything is dense linear algebra on the full register state — an
emulation faithful to the circuit's arithmetic, not a gate compiler.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ConfigError, SolverError
from ..lcu.clusters import symmetrize
from ..lcu.decompose import LcuTemplate, decompose_hadamard
from ..sparse import SparseMatrix
from .inversion import apply_eigeninversion
from .loader import load_amplitudes
from .metrics import error_norms, fidelity
from .precision import Precision
from .qpe import apply_qpe, apply_qpe_inverse, clock_marginals
from .state import StateVector
from .trotter import build_trotter_unitary, exact_unitary

__all__ = ["HhlConfig", "HhlResult", "hhl_solve"]


@dataclass(frozen=True)
class HhlConfig:
    """Emulator knobs; precision is the "m.f" register layout."""

    precision: str = "3.4"
    trotter_steps: int = 64
    rotation_constant: Optional[float] = None  # default: resolution
    prune_limit: float = 0.0
    coefficient_limit: float = 0.0
    evolution: str = "trotter"
    preflight_spectrum: bool = False

    def __post_init__(self) -> None:
        if self.evolution not in ("trotter", "exact"):
            raise ConfigError(f"unknown evolution mode {self.evolution!r}")
        if self.trotter_steps < 1:
            raise ConfigError("trotter_steps must be >= 1")
        if self.prune_limit < 0.0 or self.coefficient_limit < 0.0:
            raise ConfigError("prune and coefficient limits must be >= 0")
        spec = Precision.parse(self.precision)  # validate eagerly
        if self.rotation_constant is not None:
            if not 0.0 < self.rotation_constant <= spec.resolution:
                raise ConfigError(
                    f"rotation constant must lie in (0, {spec.resolution}] "
                    f"for precision {spec} (arcsine argument stays <= 1)")

    @property
    def precision_spec(self) -> Precision:
        return Precision.parse(self.precision)


@dataclass(eq=False)
class HhlResult:
    x: np.ndarray                  # solution of A x = b, length N
    x_hat: np.ndarray              # normalized embedded solution, length 2N
    success_probability: float     # ancilla-1 weight E
    rotations: int
    marginals: np.ndarray          # clock-code probabilities before inversion
    n_clock: int
    seconds: float
    template: LcuTemplate = field(repr=False, default=None)  # type: ignore
    fidelity: Optional[float] = None   # vs supplied reference (|overlap|)
    l2: Optional[float] = None
    rms: Optional[float] = None


def hhl_solve(matrix: SparseMatrix, rhs: np.ndarray, config: HhlConfig,
              template: Optional[LcuTemplate] = None,
              reference: Optional[np.ndarray] = None) -> HhlResult:
    """Solve A x = b through the emulated quantum pipeline.

    ``template`` may carry a ready decomposition of the embedded H (same
    pattern required); omit it to decompose on the fly.  A supplied
    classical ``reference`` solution fills the quality metrics of the
    result (compared on the extracted x block).
    """
    t0 = time.perf_counter()
    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape != (matrix.n,):
        raise SolverError("right-hand side length does not match matrix")
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm < 1e-300:
        raise SolverError("zero right-hand side; nothing to solve")

    embedded = symmetrize(matrix)
    if template is None:
        template = decompose_hadamard(embedded)
    elif template.pattern_digest != embedded.pattern_digest:
        raise SolverError("template pattern does not match the embedded "
                          "matrix; re-decompose or drop the template")

    precision = config.precision_spec
    constant = (precision.default_rotation_constant
                if config.rotation_constant is None
                else float(config.rotation_constant))
    if config.preflight_spectrum:
        eigenvalues = np.linalg.eigvalsh(embedded.to_dense())
        low, high = float(eigenvalues.min()), float(eigenvalues.max())
        if low < precision.min_value or high > precision.max_value:
            raise SolverError(
                f"spectrum [{low:.4g}, {high:.4g}] exceeds the representable "
                f"range [{precision.min_value:g}, {precision.max_value:g}] "
                f"at precision {precision}")
    n_input = template.n_qubits
    state = StateVector(n_input, precision.n_clock)
    big_rhs = np.concatenate([rhs, np.zeros(matrix.n)])
    state.grid[0, 0, :] = load_amplitudes(big_rhs)

    if config.evolution == "trotter":
        unitary = build_trotter_unitary(template, precision.evolution_time,
                                        config.trotter_steps,
                                        config.coefficient_limit)
    else:
        unitary = exact_unitary(embedded, precision.evolution_time)

    apply_qpe(state, unitary)
    marginals = clock_marginals(state)
    rotations = apply_eigeninversion(state, precision, constant,
                                     config.prune_limit)
    apply_qpe_inverse(state, unitary)

    success = state.ancilla_one_probability()
    if success < 1e-30:
        raise SolverError("ancilla success probability vanished; eigenvalues "
                          "likely unrepresentable at this precision")
    block = state.grid[1, 0, :]
    block_norm = np.linalg.norm(block)
    if block_norm < 1e-300:
        raise SolverError("empty solution block after uncompute")
    x_hat = np.real(block / block_norm)
    x_embedded = rhs_norm * (np.sqrt(success) / constant) * x_hat
    x = x_embedded[matrix.n:]
    quality: dict = {}
    if reference is not None:
        quality["fidelity"] = fidelity(x, reference)
        quality["l2"], quality["rms"] = error_norms(x, reference)
    return HhlResult(
        x=x,
        x_hat=x_hat,
        success_probability=success,
        rotations=rotations,
        marginals=marginals,
        n_clock=precision.n_clock,
        seconds=time.perf_counter() - t0,
        template=template,
        **quality,
    )

"""Pressure-correction solves routed through the emulated quantum solver.

The outer cavity loop is untouched: a stateful solver object plugs into
the ``pc_solver`` seam, building the Pauli template once on the first
pressure matrix and refreshing only coefficients afterwards (the sparsity
pattern is fixed by the mesh).  Run comparison and system sampling
helpers live here as well.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cavity.gauss_seidel import gauss_seidel
from .cavity.simple import SimpleResult, classical_pc_solver, run_simple
from .config import CaseConfig
from .errors import SolverError
from .hhl.metrics import fidelity
from .hhl.solver import HhlConfig, hhl_solve
from .lcu.clusters import symmetrize
from .lcu.decompose import (LcuTemplate, decompose_hadamard,
                            filter_by_coefficient, reevaluate)
from .sparse import SparseMatrix

__all__ = ["HhlPcSolver", "run_hybrid", "RunComparison", "compare_runs",
           "SampledSystem", "sample_systems"]

_SKIP_NORM = 1e-13


@dataclass(eq=False)
class HhlPcSolver:
    """Stateful pressure-correction callback: decompose once, then
    re-evaluate per outer iteration and solve through the emulator.

    A right-hand side below the skip norm returns the zero correction
    without touching the emulator (the field is already divergence-free
    to machine precision there, and the scale factor sqrt(E)/C would
    amplify noise).  ``gs_shadow`` additionally solves each system
    classically to log per-iteration solution fidelity.
    """

    hhl_config: HhlConfig
    filter_limit: float = 0.0
    gs_shadow: bool = False
    gs_tol: float = 1e-13
    gs_max: int = 1_000_000
    template: Optional[LcuTemplate] = None
    decompose_count: int = 0
    reevaluate_count: int = 0
    solve_count: int = 0
    skip_count: int = 0
    decompose_seconds: float = 0.0
    reevaluate_seconds: float = 0.0
    shadow_fidelities: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)  # one row per HHL call

    def __call__(self, matrix: SparseMatrix, rhs: np.ndarray,
                 iteration: int) -> tuple[np.ndarray, int]:
        if float(np.linalg.norm(rhs)) < _SKIP_NORM:
            self.skip_count += 1
            return np.zeros(matrix.n), 0
        embedded = symmetrize(matrix)
        if (self.template is None
                or self.template.pattern_digest != embedded.pattern_digest):
            t0 = time.perf_counter()
            template = decompose_hadamard(embedded)
            if self.filter_limit > 0.0:
                template = filter_by_coefficient(template, self.filter_limit)
            self.template = template
            self.decompose_seconds += time.perf_counter() - t0
            self.decompose_count += 1
        else:
            t0 = time.perf_counter()
            reevaluate(self.template, embedded)
            self.reevaluate_seconds += time.perf_counter() - t0
            self.reevaluate_count += 1
        result = hhl_solve(matrix, rhs, self.hhl_config,
                           template=self.template)
        self.solve_count += 1
        shadow = None
        if self.gs_shadow:
            reference = gauss_seidel(matrix, rhs, tol=self.gs_tol,
                                     max_iter=self.gs_max).x
            shadow = fidelity(result.x, reference)
            self.shadow_fidelities.append((iteration, shadow))
        self.diagnostics.append(
            (iteration, result.rotations, result.success_probability, shadow))
        return result.x, result.rotations


def run_hybrid(config: CaseConfig, hhl_config: Optional[HhlConfig] = None,
               filter_limit: float = 0.0, gs_shadow: bool = False
               ) -> tuple[SimpleResult, HhlPcSolver]:
    """Cavity run with the emulated solver on pressure correction."""
    solver = HhlPcSolver(hhl_config or HhlConfig(),
                         filter_limit=filter_limit, gs_shadow=gs_shadow)
    result = run_simple(config, pc_solver=solver)
    return result, solver


@dataclass(eq=False)
class RunComparison:
    """Classical and hybrid histories aligned on shared iterations."""

    classical: SimpleResult
    hybrid: SimpleResult
    iterations: np.ndarray
    classical_dp: np.ndarray
    hybrid_dp: np.ndarray
    classical_continuity: np.ndarray
    hybrid_continuity: np.ndarray
    hybrid_stagnated: bool

    def dp_ratio(self) -> np.ndarray:
        """Per-iteration hybrid / classical pressure-update RMS."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.hybrid_dp / self.classical_dp


def _stagnated(result: SimpleResult, window: int = 50) -> bool:
    """Not converged and continuity stopped improving (under 1% over the
    final window)."""
    if result.converged:
        return False
    cont = result.column("rms_continuity")
    if cont.size <= window:
        return False
    recent, past = cont[-1], cont[-1 - window]
    if past <= 0.0:
        return False
    return bool((past - recent) / past < 0.01)


def compare_runs(classical: SimpleResult, hybrid: SimpleResult
                 ) -> RunComparison:
    shared = min(classical.iterations, hybrid.iterations)
    its = np.arange(1, shared + 1)
    return RunComparison(
        classical=classical,
        hybrid=hybrid,
        iterations=its,
        classical_dp=classical.column("rms_dp")[:shared],
        hybrid_dp=hybrid.column("rms_dp")[:shared],
        classical_continuity=classical.column("rms_continuity")[:shared],
        hybrid_continuity=hybrid.column("rms_continuity")[:shared],
        hybrid_stagnated=_stagnated(hybrid),
    )


@dataclass(eq=False)
class SampledSystem:
    iteration: int           # outer iteration actually captured
    requested_iteration: int
    matrix: SparseMatrix
    rhs: np.ndarray
    solution: np.ndarray
    gs_iterations: int
    warning: Optional[str] = None


def sample_systems(config: CaseConfig, iterations: tuple[int, ...] = (10, 100)
                   ) -> dict[int, SampledSystem]:
    """Capture pressure-correction systems at chosen outer iterations
    during an otherwise classical run.

    A request past the run's end (it converged first) yields the final
    iteration's system with a warning attached instead of failing — the
    converged-state system is still a legitimate sample.
    """
    wanted = set(iterations)
    if not wanted:
        raise SolverError("no sample iterations requested")
    captured: dict[int, SampledSystem] = {}
    last: list = []
    base = classical_pc_solver(config)

    def solver(matrix: SparseMatrix, rhs: np.ndarray, iteration: int
               ) -> tuple[np.ndarray, int]:
        x, count = base(matrix, rhs, iteration)
        last[:] = [iteration, matrix, rhs.copy(), x.copy(), count]
        if iteration in wanted:
            captured[iteration] = SampledSystem(iteration, iteration, matrix,
                                                rhs.copy(), x.copy(), count)
        return x, count

    run_simple(config, pc_solver=solver)
    if not last:
        raise SolverError("run performed no pressure-correction solves")
    for missing in sorted(wanted - set(captured)):
        it, matrix, rhs, x, count = last
        captured[missing] = SampledSystem(
            it, missing, matrix, rhs, x, count,
            warning=f"run converged after {it} outer iterations; exported "
                    f"the final system in place of iteration {missing}")
    return {k: captured[k] for k in sorted(captured)}

"""SIMPLE outer iteration for the lid-driven cavity.

Each outer pass assembles both momentum systems from the current fields,
solves them with warm-started Gauss-Seidel, assembles the anchored
pressure-correction system from the provisional velocities, hands it to a
pluggable solver callback, and applies the corrections.  Convergence is
declared when the RMS of all three correction fields drops below the
outer tolerance.

The pressure-correction callback is the seam where the quantum-emulated
solver plugs in; the classical baseline is the same Gauss-Seidel started
from zero (the correction is a fresh unknown every pass, so there is
nothing to warm-start from).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..config import CaseConfig
from ..errors import DivergenceError
from ..sparse import SparseMatrix
from .assembly import (assemble_momentum, assemble_pressure_correction,
                       correct_fields, mass_imbalance)
from .gauss_seidel import gauss_seidel
from .mesh import FlowState, StaggeredMesh, flatten, unflatten

__all__ = ["IterationRecord", "SimpleResult", "PcSolver",
           "classical_pc_solver", "run_simple", "rms"]

HISTORY_COLUMNS = ("iter", "rms_du", "rms_dv", "rms_dp", "rms_continuity",
                   "gs_u", "gs_v", "gs_p", "seconds")

RUNAWAY_RMS = 1e6

# pc_solver(matrix, rhs, outer_iteration) -> (p_prime, inner_iterations)
PcSolver = Callable[[SparseMatrix, np.ndarray, int], tuple[np.ndarray, int]]


def rms(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    return float(np.sqrt(np.mean(a * a))) if a.size else 0.0


@dataclass
class IterationRecord:
    iteration: int
    rms_du: float
    rms_dv: float
    rms_dp: float
    rms_continuity: float
    gs_u: int
    gs_v: int
    gs_p: int
    seconds: float

    def as_row(self) -> tuple:
        return (self.iteration, self.rms_du, self.rms_dv, self.rms_dp,
                self.rms_continuity, self.gs_u, self.gs_v, self.gs_p,
                self.seconds)


@dataclass
class SimpleResult:
    state: FlowState
    history: list[IterationRecord] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    seconds: float = 0.0

    def column(self, name: str) -> np.ndarray:
        i = HISTORY_COLUMNS.index(name)
        return np.array([r.as_row()[i] for r in self.history])


def classical_pc_solver(config: CaseConfig) -> PcSolver:
    """Cold-started Gauss-Seidel on the pressure-correction system."""
    def solve(matrix: SparseMatrix, rhs: np.ndarray, iteration: int):
        res = gauss_seidel(matrix, rhs, x0=None,
                           tol=config.gs_tol, max_iter=config.gs_max)
        return res.x, res.iterations
    return solve


def run_simple(config: CaseConfig,
               pc_solver: PcSolver | None = None) -> SimpleResult:
    mesh = StaggeredMesh(config.nodes_per_side)
    nc = mesh.nc
    if pc_solver is None:
        pc_solver = classical_pc_solver(config)

    state = FlowState.zeros(mesh)
    result = SimpleResult(state=state)
    t_run = time.perf_counter()

    for outer in range(1, config.outer_max + 1):
        t0 = time.perf_counter()

        systems = assemble_momentum(state, mesh, config)
        sol_u = gauss_seidel(systems.a_u, systems.rhs_u,
                             x0=flatten(state.u[1:nc, :]),
                             tol=config.gs_tol, max_iter=config.gs_max)
        sol_v = gauss_seidel(systems.a_v, systems.rhs_v,
                             x0=flatten(state.v[:, 1:nc]),
                             tol=config.gs_tol, max_iter=config.gs_max)

        star = state.copy()
        star.u[1:nc, :] = unflatten(sol_u.x, (nc - 1, nc))
        star.v[:, 1:nc] = unflatten(sol_v.x, (nc, nc - 1))

        cont = rms(mass_imbalance(star, mesh, config))
        pc_matrix, pc_rhs = assemble_pressure_correction(
            star, systems.diag_u, systems.diag_v, mesh, config)
        p_prime, gs_p = pc_solver(pc_matrix, pc_rhs, outer)

        state, du, dv = correct_fields(star, p_prime, systems.diag_u,
                                       systems.diag_v, mesh, config)

        rec = IterationRecord(
            iteration=outer,
            rms_du=rms(du), rms_dv=rms(dv),
            rms_dp=rms(config.relax_pressure * p_prime),
            rms_continuity=cont,
            gs_u=sol_u.iterations, gs_v=sol_v.iterations, gs_p=gs_p,
            seconds=time.perf_counter() - t0)
        result.history.append(rec)
        result.state = state
        result.iterations = outer

        if max(rec.rms_du, rec.rms_dv, rec.rms_dp) > RUNAWAY_RMS:
            raise DivergenceError(
                f"outer iteration {outer} ran away "
                f"(correction RMS {max(rec.rms_du, rec.rms_dv, rec.rms_dp):.3e})")
        if max(rec.rms_du, rec.rms_dv, rec.rms_dp) < config.outer_tol:
            result.converged = True
            break

    result.seconds = time.perf_counter() - t_run
    return result

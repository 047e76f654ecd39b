"""Finite-volume assemblies for the staggered cavity.

Momentum equations use first-order upwinding for convection and central
differences for diffusion.  Every equation is written as

    a_P * phi_P - sum_nb a_nb * phi_nb = rhs,

so the assembled CSR rows carry a positive diagonal a_P and negated
neighbour coefficients.  a_P is the plain sum of the neighbour
coefficients (the net convective flux term is dropped), which keeps every
row weakly diagonally dominant for any velocity field.

Wall treatment: a neighbour that lies *on* a wall parallel to the velocity
component (the lid and floor for u, the side walls for v) sits half a cell
away, so its diffusive coefficient doubles and its contribution is folded
straight into a_P / rhs.  A neighbour on a wall normal to the component is
a stored boundary face value at full spacing and also folds into rhs.

Momentum under-relaxation is implicit: with factor alpha the stored
diagonal is a_P / alpha and (1 - alpha) * (a_P / alpha) * u_current moves
to the right-hand side, so the relaxed equation still holds exactly at a
converged state.  The pressure-correction coefficients and the velocity
corrections divide by the *relaxed* diagonal, which keeps the correction
step mass-exact.  The corrections themselves are always applied in full.

The pressure-correction system reuses the same five-point machinery; its
row sums vanish by construction and one cell is anchored to pin the
otherwise floating pressure level.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..config import CaseConfig
from ..sparse import SparseMatrix
from .mesh import FlowState, StaggeredMesh, flatten, unflatten

__all__ = [
    "MomentumSystems",
    "assemble_momentum",
    "assemble_pressure_correction",
    "mass_imbalance",
    "correct_fields",
    "ANCHOR_CELL",
]

ANCHOR_CELL = 0


# ---------------------------------------------------------------------------
# shared five-point stencil plan


@dataclass(frozen=True)
class _StencilPlan:
    """Fixed CSR pattern for a five-point stencil on an (nx, ny) grid.

    ``pos_*`` give, per unknown, the position of that neighbour's entry in
    the CSR value array (-1 where the neighbour does not exist).  The
    ``pattern`` matrix carries zero values and is only used as the shared
    pattern via ``with_values``.
    """

    nx: int
    ny: int
    pattern: SparseMatrix
    pos_p: np.ndarray
    pos_w: np.ndarray
    pos_e: np.ndarray
    pos_s: np.ndarray
    pos_n: np.ndarray

    def assemble(self, a_p, a_w, a_e, a_s, a_n) -> SparseMatrix:
        """Scatter coefficient grids (positive a_nb) into a CSR matrix."""
        values = np.empty(self.pattern.nnz)
        values[self.pos_p] = flatten(a_p)
        for pos, grid in ((self.pos_w, a_w), (self.pos_e, a_e),
                          (self.pos_s, a_s), (self.pos_n, a_n)):
            ok = pos >= 0
            values[pos[ok]] = -flatten(grid)[ok]
        return self.pattern.with_values(values)


@lru_cache(maxsize=None)
def _stencil_plan(nx: int, ny: int) -> _StencilPlan:
    n = nx * ny
    k = np.arange(n, dtype=np.int64)
    ix = k % nx
    iy = k // nx
    has_w = ix > 0
    has_e = ix < nx - 1
    has_s = iy > 0
    has_n = iy < ny - 1

    counts = 1 + has_w + has_e + has_s + has_n
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])

    # within-row offsets in ascending column order: S < W < P < E < N
    off_s = np.zeros(n, dtype=np.int64)
    off_w = has_s.astype(np.int64)
    off_p = off_w + has_w
    off_e = off_p + 1
    off_n = off_e + has_e

    base = indptr[:-1]
    pos_p = base + off_p
    pos_w = np.where(has_w, base + off_w, -1)
    pos_e = np.where(has_e, base + off_e, -1)
    pos_s = np.where(has_s, base + off_s, -1)
    pos_n = np.where(has_n, base + off_n, -1)

    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    indices[pos_p] = k
    indices[pos_w[has_w]] = k[has_w] - 1
    indices[pos_e[has_e]] = k[has_e] + 1
    indices[pos_s[has_s]] = k[has_s] - nx
    indices[pos_n[has_n]] = k[has_n] + nx

    pattern = SparseMatrix(n, indptr, indices, np.zeros(len(indices)))
    return _StencilPlan(nx, ny, pattern, pos_p, pos_w, pos_e, pos_s, pos_n)


# ---------------------------------------------------------------------------
# momentum


@dataclass
class MomentumSystems:
    """Both momentum systems assembled from one flow snapshot.

    ``diag_u``/``diag_v`` are the a_P coefficients on their staggered grids,
    kept because the pressure-correction coefficients and the velocity
    corrections both divide by them.
    """

    a_u: SparseMatrix
    rhs_u: np.ndarray
    a_v: SparseMatrix
    rhs_v: np.ndarray
    diag_u: np.ndarray
    diag_v: np.ndarray


def assemble_momentum(state: FlowState, mesh: StaggeredMesh,
                      config: CaseConfig) -> MomentumSystems:
    nc = mesh.nc
    h = mesh.h
    rho = config.density
    mu = config.viscosity
    u, v, p = state.u, state.v, state.p

    # --- u momentum: unknowns on interior vertical faces, grid (nc-1, nc)
    ue = 0.5 * (u[1:nc, :] + u[2:, :])
    uw = 0.5 * (u[:nc - 1, :] + u[1:nc, :])
    vn = 0.5 * (v[:nc - 1, 1:] + v[1:, 1:])
    vs = 0.5 * (v[:nc - 1, :nc] + v[1:, :nc])
    fe, fw = rho * h * ue, rho * h * uw
    fn, fs = rho * h * vn, rho * h * vs

    de = np.full(ue.shape, mu)
    dw = np.full(ue.shape, mu)
    dn = np.full(ue.shape, mu)
    ds = np.full(ue.shape, mu)
    dn[:, -1] = 2.0 * mu          # lid half a cell away
    ds[:, 0] = 2.0 * mu           # floor half a cell away

    alpha = config.relax_velocity
    a_e = de + np.maximum(-fe, 0.0)
    a_w = dw + np.maximum(fw, 0.0)
    a_n = dn + np.maximum(-fn, 0.0)
    a_s = ds + np.maximum(fs, 0.0)
    a_p = (a_e + a_w + a_n + a_s) / alpha

    rhs = -(p[1:, :] - p[:-1, :]) * h
    rhs += (1.0 - alpha) * a_p * u[1:nc, :]   # implicit relaxation source
    rhs[0, :] += a_w[0, :] * u[0, :]          # left-wall face values
    rhs[-1, :] += a_e[-1, :] * u[nc, :]       # right-wall face values
    rhs[:, 0] += a_s[:, 0] * 0.0              # floor, no slip
    rhs[:, -1] += a_n[:, -1] * config.lid_velocity

    plan_u = _stencil_plan(nc - 1, nc)
    a_u = plan_u.assemble(a_p, a_w, a_e, a_s, a_n)
    rhs_u = flatten(rhs)
    diag_u = a_p

    # --- v momentum: unknowns on interior horizontal faces, grid (nc, nc-1)
    vn2 = 0.5 * (v[:, 1:nc] + v[:, 2:])
    vs2 = 0.5 * (v[:, :nc - 1] + v[:, 1:nc])
    ue2 = 0.5 * (u[1:, :nc - 1] + u[1:, 1:nc])
    uw2 = 0.5 * (u[:nc, :nc - 1] + u[:nc, 1:nc])
    fn2, fs2 = rho * h * vn2, rho * h * vs2
    fe2, fw2 = rho * h * ue2, rho * h * uw2

    de2 = np.full(vn2.shape, mu)
    dw2 = np.full(vn2.shape, mu)
    dn2 = np.full(vn2.shape, mu)
    ds2 = np.full(vn2.shape, mu)
    dw2[0, :] = 2.0 * mu          # left wall half a cell away
    de2[-1, :] = 2.0 * mu         # right wall half a cell away

    b_e = de2 + np.maximum(-fe2, 0.0)
    b_w = dw2 + np.maximum(fw2, 0.0)
    b_n = dn2 + np.maximum(-fn2, 0.0)
    b_s = ds2 + np.maximum(fs2, 0.0)
    b_p = (b_e + b_w + b_n + b_s) / alpha

    rhs2 = -(p[:, 1:] - p[:, :-1]) * h
    rhs2 += (1.0 - alpha) * b_p * v[:, 1:nc]  # implicit relaxation source
    rhs2[:, 0] += b_s[:, 0] * v[:, 0]         # floor face values
    rhs2[:, -1] += b_n[:, -1] * v[:, nc]      # ceiling face values
    rhs2[0, :] += b_w[0, :] * 0.0             # side walls, no slip
    rhs2[-1, :] += b_e[-1, :] * 0.0

    plan_v = _stencil_plan(nc, nc - 1)
    a_v = plan_v.assemble(b_p, b_w, b_e, b_s, b_n)
    rhs_v = flatten(rhs2)
    diag_v = b_p

    return MomentumSystems(a_u, rhs_u, a_v, rhs_v, diag_u, diag_v)


# ---------------------------------------------------------------------------
# pressure correction


def mass_imbalance(state: FlowState, mesh: StaggeredMesh,
                   config: CaseConfig) -> np.ndarray:
    """Net mass outflow of every cell, shape (nc, nc)."""
    u, v = state.u, state.v
    return config.density * mesh.h * (
        (u[1:, :] - u[:-1, :]) + (v[:, 1:] - v[:, :-1]))


def assemble_pressure_correction(state_star: FlowState,
                                 diag_u: np.ndarray, diag_v: np.ndarray,
                                 mesh: StaggeredMesh,
                                 config: CaseConfig) -> tuple[SparseMatrix, np.ndarray]:
    """Pressure-correction system with the anchor cell pinned.

    Neighbour coefficients across a wall are zero (no correction flux),
    making all row sums vanish.  Row ``ANCHOR_CELL`` keeps its diagonal but
    has its neighbour entries stored as explicit zeros and a zero rhs, so
    the correction there is pinned to zero while the pattern stays the full
    interior five-point one.
    """
    nc = mesh.nc
    coef = config.density * mesh.h * mesh.h

    a_e = np.zeros((nc, nc))
    a_w = np.zeros((nc, nc))
    a_n = np.zeros((nc, nc))
    a_s = np.zeros((nc, nc))
    a_e[:nc - 1, :] = coef / diag_u
    a_w[1:, :] = coef / diag_u
    a_n[:, :nc - 1] = coef / diag_v
    a_s[:, 1:] = coef / diag_v
    a_p = a_e + a_w + a_n + a_s

    plan = _stencil_plan(nc, nc)
    matrix = plan.assemble(a_p, a_w, a_e, a_s, a_n)
    for pos in (plan.pos_w[ANCHOR_CELL], plan.pos_e[ANCHOR_CELL],
                plan.pos_s[ANCHOR_CELL], plan.pos_n[ANCHOR_CELL]):
        if pos >= 0:
            matrix.values[pos] = 0.0

    rhs = flatten(-mass_imbalance(state_star, mesh, config))
    rhs[ANCHOR_CELL] = 0.0
    return matrix, rhs


def correct_fields(state_star: FlowState, p_prime: np.ndarray,
                   diag_u: np.ndarray, diag_v: np.ndarray,
                   mesh: StaggeredMesh, config: CaseConfig
                   ) -> tuple[FlowState, np.ndarray, np.ndarray]:
    """Apply the corrections: velocities in full (that is what makes the
    corrected field mass-exact), pressure scaled by its relaxation factor.
    Returns the new state and the velocity-correction grids."""
    nc = mesh.nc
    pg = unflatten(p_prime, mesh.p_shape)
    du = -(mesh.h / diag_u) * (pg[1:, :] - pg[:-1, :])
    dv = -(mesh.h / diag_v) * (pg[:, 1:] - pg[:, :-1])

    u = state_star.u.copy()
    v = state_star.v.copy()
    u[1:nc, :] += du
    v[:, 1:nc] += dv
    p = state_star.p + config.relax_pressure * pg
    return FlowState(u, v, p), du, dv

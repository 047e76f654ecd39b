"""Staggered-mesh bookkeeping for the unit cavity.

Field storage convention (everywhere in this package):

* arrays are indexed ``[i, j]`` with i the x index and j the y index;
* ``u`` lives on vertical faces, shape (nc + 1, nc) — u[0] and u[nc] are the
  no-slip walls and are stored (always zero), interior faces i = 1..nc-1 are
  the unknowns;
* ``v`` lives on horizontal faces, shape (nc, nc + 1) — walls at j = 0 and nc;
* ``p`` lives at cell centres, shape (nc, nc).

Unknown vectors are ordered x-fastest: cell (i, j) gets index i + nc * j,
which is ``grid.ravel(order="F")`` under the [i, j] storage convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["StaggeredMesh", "FlowState", "flatten", "unflatten"]


def flatten(grid: np.ndarray) -> np.ndarray:
    """Grid -> unknown vector, index = i + nx * j."""
    return grid.ravel(order="F")


def unflatten(vec: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Unknown vector -> grid of the given (nx, ny) shape."""
    return vec.reshape(shape, order="F")


@dataclass(frozen=True)
class StaggeredMesh:
    """Uniform staggered mesh on the unit square."""

    nodes_per_side: int

    @property
    def nc(self) -> int:
        """Cells per side."""
        return self.nodes_per_side - 1

    @property
    def h(self) -> float:
        """Cell size (dx = dy)."""
        return 1.0 / self.nc

    @property
    def u_shape(self) -> tuple[int, int]:
        return (self.nc + 1, self.nc)

    @property
    def v_shape(self) -> tuple[int, int]:
        return (self.nc, self.nc + 1)

    @property
    def p_shape(self) -> tuple[int, int]:
        return (self.nc, self.nc)

    @property
    def n_u_unknowns(self) -> int:
        return (self.nc - 1) * self.nc

    @property
    def n_v_unknowns(self) -> int:
        return self.nc * (self.nc - 1)

    @property
    def n_cells(self) -> int:
        return self.nc * self.nc

    def cell_index(self, i: int, j: int) -> int:
        return i + self.nc * j


@dataclass
class FlowState:
    """The three staggered fields of one cavity snapshot."""

    u: np.ndarray
    v: np.ndarray
    p: np.ndarray

    @classmethod
    def zeros(cls, mesh: StaggeredMesh) -> "FlowState":
        return cls(u=np.zeros(mesh.u_shape),
                   v=np.zeros(mesh.v_shape),
                   p=np.zeros(mesh.p_shape))

    def copy(self) -> "FlowState":
        return FlowState(self.u.copy(), self.v.copy(), self.p.copy())

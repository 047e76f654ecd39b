"""Cluster discovery and per-cluster sign tables.

Every stored entry (r, c) of a symmetric matrix selects the x-mask r ^ c;
the distinct masks partition the candidate Pauli strings into clusters.
Within a cluster all members share that x-mask and differ only in z-mask,
restricted to even Y count — 2**(n-1) members per nonzero mask, 2**n for
the diagonal mask 0.

The sign table of a cluster is the row-indexed ±1 matrix

    S[m, k] = iy_m * (-1)**popcount(z_m & (k ^ x)),

whose rows are mutually orthogonal with S @ S.T == 2**n * I.  It is kept
bit-packed (uint8, little bit order) and unpacked on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SolverError
from ..sparse import SparseMatrix
from .strings import PauliString, popcount

__all__ = ["symmetrize", "find_clusters", "Cluster", "build_cluster"]


def symmetrize(matrix: SparseMatrix) -> SparseMatrix:
    """Embed a square matrix A into the symmetric [[0, A], [A^T, 0]].

    The result has twice the dimension; a solution of the embedded system
    with right-hand side (b, 0) carries the solution of A x = b in its
    bottom half.  Explicit zeros of A are preserved as stored entries.
    """
    n = matrix.n
    rows = matrix.row_index
    cols = matrix.indices
    big_rows = np.concatenate([rows, cols + n])
    big_cols = np.concatenate([cols + n, rows])
    big_vals = np.concatenate([matrix.values, matrix.values])
    return SparseMatrix.from_coo(2 * n, big_rows, big_cols, big_vals)


def _qubit_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise SolverError(f"matrix dimension {dim} is not a power of two; "
                          "pad or embed the system first")
    return n


def find_clusters(matrix: SparseMatrix) -> list[int]:
    """Sorted distinct x-masks (row ^ col) over the stored pattern."""
    _qubit_count(matrix.n)
    masks = np.unique(matrix.row_index ^ matrix.indices)
    return [int(m) for m in masks]


@dataclass(frozen=True, eq=False)
class Cluster:
    """All even-Y candidate strings sharing one x-mask, plus sign rows."""

    n_qubits: int
    x_mask: int
    z_masks: np.ndarray      # ascending, int64, shape (M,)
    iy_signs: np.ndarray     # int8 ±1, real value of i**y per member
    packed_signs: np.ndarray # uint8, shape (M, 2**n / 8), little bit order

    @property
    def member_count(self) -> int:
        return int(self.z_masks.size)

    def members(self) -> list[PauliString]:
        return [PauliString(self.n_qubits, self.x_mask, int(z))
                for z in self.z_masks]

    def sign_rows(self, dtype=np.float64) -> np.ndarray:
        """Unpacked ±1 sign table, shape (member_count, 2**n)."""
        dim = 1 << self.n_qubits
        bits = np.unpackbits(self.packed_signs, axis=1, count=dim,
                             bitorder="little")
        return (2 * bits.astype(dtype) - 1)


def build_cluster(x_mask: int, n_qubits: int,
                  _chunk: int = 512) -> Cluster:
    """Enumerate one cluster's members and pack its sign table."""
    dim = 1 << n_qubits
    if not 0 <= x_mask < dim:
        raise SolverError("x-mask out of range for qubit count")
    z_all = np.arange(dim, dtype=np.int64)
    z_masks = z_all[(popcount(z_all & x_mask) & 1) == 0]
    y = popcount(z_masks & x_mask)
    iy = (1 - (y & 2)).astype(np.int8)
    cols = z_all ^ x_mask
    packed_parts = []
    for lo in range(0, z_masks.size, _chunk):  # bound peak memory at scale
        zc = z_masks[lo:lo + _chunk]
        parity = (popcount(zc[:, None] & cols[None, :]) & 1).astype(np.uint8)
        positive = np.where(iy[lo:lo + _chunk, None] > 0, parity ^ 1, parity)
        packed_parts.append(np.packbits(positive, axis=1, bitorder="little"))
    packed = (np.concatenate(packed_parts, axis=0) if packed_parts
              else np.zeros((0, max(dim // 8, 1)), dtype=np.uint8))
    return Cluster(n_qubits, int(x_mask), z_masks, iy, packed)

"""Pauli strings as (x_mask, z_mask) bit pairs.

Qubit q corresponds to bit q of both masks (qubit 0 = least significant =
rightmost letter in labels).  The represented matrix is 1-sparse: the only
nonzero in row k sits at column k ^ x_mask and equals

    i**y * (-1)**popcount(z_mask & (k ^ x_mask)),   y = popcount(x & z).

Strings with an even Y count are real and symmetric — those are the only
ones a real symmetric matrix needs, and the only ones admitted here to
the decomposition machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SolverError
from ..sparse import SparseMatrix

__all__ = ["PauliString", "pauli_dense", "string_matrix", "string_action",
           "popcount"]

_SYMBOLS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def popcount(a):
    """Per-element set-bit count of a non-negative integer array."""
    return np.bitwise_count(np.asarray(a, dtype=np.int64)).astype(np.int64)


@dataclass(frozen=True)
class PauliString:
    n: int
    x_mask: int
    z_mask: int

    def __post_init__(self) -> None:
        lim = 1 << self.n
        if not (0 <= self.x_mask < lim and 0 <= self.z_mask < lim):
            raise ValueError("mask out of range for qubit count")

    @property
    def y_count(self) -> int:
        return int(self.x_mask & self.z_mask).bit_count()

    @property
    def even_y(self) -> bool:
        return self.y_count % 2 == 0

    @property
    def label(self) -> str:
        return "".join(_SYMBOLS[((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)]
                       for q in reversed(range(self.n)))


def string_action(x_mask: int, z_mask: int, n: int
                  ) -> tuple[np.ndarray, np.ndarray]:
    """(perm, signs) of an even-Y string: row k holds signs[k] at column
    perm[k].  Because the string is symmetric the same arrays also describe
    it column-wise."""
    y = int(x_mask & z_mask).bit_count()
    if y % 2:
        raise SolverError("odd-Y string is not real; refusing real-mode action")
    iy = 1 - (y & 2)          # real value of i**y for even y
    perm = np.arange(1 << n, dtype=np.int64) ^ x_mask
    signs = iy * (1.0 - 2.0 * (popcount(perm & z_mask) & 1))
    return perm, signs


def pauli_dense(x_mask: int, z_mask: int, n: int) -> np.ndarray:
    """Dense complex matrix of an arbitrary string (odd Y allowed)."""
    dim = 1 << n
    y = int(x_mask & z_mask).bit_count()
    cols = np.arange(dim, dtype=np.int64)
    vals = (1j ** y) * (-1.0) ** (popcount(cols & z_mask) & 1)
    out = np.zeros((dim, dim), dtype=complex)
    out[cols ^ x_mask, cols] = vals
    return out


def string_matrix(string: PauliString) -> SparseMatrix:
    """1-sparse real matrix of an even-Y string."""
    perm, signs = string_action(string.x_mask, string.z_mask, string.n)
    rows = np.arange(1 << string.n, dtype=np.int64)
    return SparseMatrix.from_coo(1 << string.n, rows, perm, signs)

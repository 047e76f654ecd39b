"""Minimal square CSR matrix with a stable stored-entry pattern.

The whole workbench leans on one property of this class: the *pattern*
(indptr/indices) of a matrix is decided once, kept in deterministic
row-major/column-ascending order, and then reused across many assemblies
that only swap the value array.  Explicitly stored zeros are first-class
citizens — they stay in the pattern, survive file round trips, and are
what the decomposition templates key on.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

__all__ = ["SparseMatrix"]


@dataclass(eq=False)
class SparseMatrix:
    """Square sparse matrix in compressed-sparse-row form.

    Attributes:
        n: matrix dimension.
        indptr: row pointers, shape (n + 1,), int64.
        indices: column indices, ascending within each row, int64.
        values: stored entries (explicit zeros allowed), float64.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    _digest: str | None = field(default=None, repr=False)
    _flat_keys: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.indptr.shape != (self.n + 1,):
            raise ValueError("indptr must have length n + 1")
        if self.indptr[0] != 0 or self.indptr[-1] != len(self.indices):
            raise ValueError("indptr endpoints do not match indices")
        if len(self.values) != len(self.indices):
            raise ValueError("values and indices length mismatch")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_coo(cls, n: int, rows, cols, values) -> "SparseMatrix":
        """Build from triplets, sorting into canonical CSR order.

        Duplicate (row, col) pairs are rejected rather than summed: every
        assembly in this package produces each stored entry exactly once.
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if not (rows.shape == cols.shape == values.shape):
            raise ValueError("triplet arrays must have equal length")
        if len(rows) and (rows.min() < 0 or rows.max() >= n
                          or cols.min() < 0 or cols.max() >= n):
            raise ValueError("triplet index out of range")
        order = np.lexsort((cols, rows))
        rows, cols, values = rows[order], cols[order], values[order]
        keys = rows * n + cols
        if len(keys) > 1 and np.any(np.diff(keys) == 0):
            raise ValueError("duplicate (row, col) entry in triplets")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(n, indptr, cols, values)

    @classmethod
    def from_dense(cls, a: np.ndarray, keep_zeros: bool = False) -> "SparseMatrix":
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square 2-D array")
        if keep_zeros:
            rows, cols = np.indices(a.shape)
            rows, cols = rows.ravel(), cols.ravel()
        else:
            rows, cols = np.nonzero(a)
        return cls.from_coo(a.shape[0], rows, cols, a[rows, cols])

    def with_values(self, values) -> "SparseMatrix":
        """Same pattern (shared arrays, shared digest), new values."""
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise ValueError("value array does not match pattern size")
        out = SparseMatrix(self.n, self.indptr, self.indices, values)
        out._digest = self._digest
        out._flat_keys = self._flat_keys
        return out

    # -- queries ----------------------------------------------------------

    @property
    def nnz(self) -> int:
        return int(len(self.indices))

    @property
    def row_index(self) -> np.ndarray:
        """Row of each stored entry, shape (nnz,)."""
        return np.repeat(np.arange(self.n, dtype=np.int64),
                         np.diff(self.indptr))

    @property
    def pattern_digest(self) -> str:
        """Hex digest identifying (n, indptr, indices); value-independent."""
        if self._digest is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(np.int64(self.n).tobytes())
            h.update(self.indptr.tobytes())
            h.update(self.indices.tobytes())
            self._digest = h.hexdigest()
        return self._digest

    def entry_positions(self, rows, cols) -> np.ndarray:
        """Positions of (rows[i], cols[i]) in the value array, -1 if absent."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if self._flat_keys is None:
            self._flat_keys = self.row_index * self.n + self.indices
        keys = rows * self.n + cols
        pos = np.searchsorted(self._flat_keys, keys)
        pos = np.minimum(pos, max(len(self._flat_keys) - 1, 0))
        if len(self._flat_keys) == 0:
            return np.full(keys.shape, -1, dtype=np.int64)
        found = self._flat_keys[pos] == keys
        return np.where(found, pos, -1)

    def diagonal(self) -> np.ndarray:
        idx = np.arange(self.n, dtype=np.int64)
        pos = self.entry_positions(idx, idx)
        out = np.zeros(self.n)
        hit = pos >= 0
        out[hit] = self.values[pos[hit]]
        return out

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise ValueError("vector length does not match matrix size")
        prod = self.values * x[self.indices]
        return np.bincount(self.row_index, weights=prod, minlength=self.n)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        out[self.row_index, self.indices] = self.values
        return out

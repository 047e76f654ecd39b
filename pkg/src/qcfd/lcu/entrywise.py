"""Entry-wise decomposition into signed permutation (1-sparse) unitaries.

Each stored symmetric pair (r, c) of H is covered by two unitaries built
on the XOR permutation k -> k ^ (r ^ c): one with all +1 signs, one with
+1 only on the pair's own columns and -1 elsewhere.  With coefficient
h/2 on each, every position other than (r, c) and (c, r) cancels exactly,
so the sum over all stored entries reproduces H with zero floating-point
error.  Diagonal entries use the identity permutation the same way.

The price is two terms per stored pair — far more terms than the cluster
route — but each factor is manifestly unitary and the bookkeeping is
trivial, which makes this the reference everything else is checked
against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..sparse import SparseMatrix
from .clusters import _qubit_count
from .decompose import _require_symmetric

__all__ = ["OneSparseTerm", "OneSparseLcu", "decompose_entrywise"]


@dataclass(frozen=True)
class OneSparseTerm:
    """coefficient * (signed XOR permutation).

    Signs are +1 on ``plus_columns`` and ``uniform_sign`` elsewhere; the
    permutation sends column k to row k ^ xor_offset.
    """

    coefficient: float
    xor_offset: int
    plus_columns: tuple[int, ...]
    uniform_sign: int = 1

    def materialize(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        cols = np.arange(dim, dtype=np.int64)
        signs = np.full(dim, float(self.uniform_sign))
        for c in self.plus_columns:
            signs[c] = 1.0
        return cols ^ self.xor_offset, signs

    def dense(self, dim: int) -> np.ndarray:
        perm, signs = self.materialize(dim)
        out = np.zeros((dim, dim))
        out[perm, np.arange(dim)] = signs
        return out


@dataclass(eq=False)
class OneSparseLcu:
    dim: int
    terms: list[OneSparseTerm]
    pattern_digest: str

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def reconstruct_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        cols = np.arange(self.dim)
        for term in self.terms:
            perm, signs = term.materialize(self.dim)
            out[perm, cols] += term.coefficient * signs
        return out


def decompose_entrywise(matrix: SparseMatrix) -> OneSparseLcu:
    """Two signed permutations per stored symmetric pair (one per
    diagonal entry pair partner is itself)."""
    _qubit_count(matrix.n)
    _require_symmetric(matrix)
    rows = matrix.row_index
    cols = matrix.indices
    terms: list[OneSparseTerm] = []
    for r, c, v in zip(rows, cols, matrix.values):
        if c < r:
            continue  # the (c, r) partner is handled with (r, c)
        offset = int(r ^ c)
        plus = (int(c),) if r == c else (int(r), int(c))
        half = float(v) / 2.0
        terms.append(OneSparseTerm(half, offset, plus, uniform_sign=1))
        terms.append(OneSparseTerm(half, offset, plus, uniform_sign=-1))
    return OneSparseLcu(matrix.n, terms, matrix.pattern_digest)

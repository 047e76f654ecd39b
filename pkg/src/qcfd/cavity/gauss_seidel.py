"""Point Gauss-Seidel for CSR systems.

One sweep updates the unknowns in ascending index order (lexicographic in
the grid numbering used by the assemblies).  The stopping test is the RMS
of the in-sweep updates; hitting the iteration cap is reported through a
flag, not an exception, because the outer drivers want to decide for
themselves what a stalled inner solve means.

The sweep loop is jitted with numba: the pressure-correction systems on
the finer meshes need 1e4..1e6 sequential sweeps, which is far outside
what interpreted Python can do, and the recurrence cannot be vectorised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..errors import SolverError
from ..sparse import SparseMatrix

__all__ = ["GsResult", "gauss_seidel"]


@dataclass
class GsResult:
    x: np.ndarray
    iterations: int
    converged: bool


@njit(cache=True)
def _sweep_until(indptr, indices, values, b, x, tol, max_iter):
    n = b.shape[0]
    for it in range(1, max_iter + 1):
        acc = 0.0
        for i in range(n):
            row_sum = 0.0
            diag = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                if j == i:
                    diag = values[p]
                else:
                    row_sum += values[p] * x[j]
            xi = (b[i] - row_sum) / diag
            d = xi - x[i]
            acc += d * d
            x[i] = xi
        if (acc / n) ** 0.5 < tol:
            return it, True
    return max_iter, False


def gauss_seidel(matrix: SparseMatrix, rhs: np.ndarray,
                 x0: np.ndarray | None = None,
                 tol: float = 1e-13, max_iter: int = 1_000_000) -> GsResult:
    """Solve ``matrix @ x = rhs`` by forward Gauss-Seidel sweeps.

    Stops at the first sweep whose RMS update falls below ``tol``; with a
    zero right-hand side and zero start that is the very first sweep.
    ``x0`` is not modified.
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape != (matrix.n,):
        raise SolverError("rhs length does not match matrix")
    if np.any(matrix.diagonal() == 0.0):
        raise SolverError("zero diagonal entry; Gauss-Seidel undefined")
    x = np.zeros(matrix.n) if x0 is None else np.array(x0, dtype=np.float64)
    if x.shape != (matrix.n,):
        raise SolverError("x0 length does not match matrix")
    iterations, converged = _sweep_until(
        matrix.indptr, matrix.indices, matrix.values, rhs, x,
        float(tol), int(max_iter))
    return GsResult(x=x, iterations=int(iterations), converged=bool(converged))

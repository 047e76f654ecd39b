"""Time-evolution unitaries for the eigenvalue register.

Every Pauli string squares to the identity, so each factor of a product
formula is exp(i a P t / r) = cos(a t / r) I + i sin(a t / r) P, which
applies to a dense accumulator as one scaled row permutation.  The
first-order step multiplies the factors largest |coefficient| first
(stable order), and the full evolution is the step raised to the r-th
power.  ``exact_unitary`` provides the eigendecomposition reference the
product formula is measured against.
"""

from __future__ import annotations

import numpy as np

from ..errors import SolverError
from ..sparse import SparseMatrix
from ..lcu.decompose import LcuTemplate
from ..lcu.strings import string_action

__all__ = ["build_trotter_unitary", "exact_unitary"]


def build_trotter_unitary(template: LcuTemplate, time_step: float,
                          steps: int, coefficient_limit: float = 0.0
                          ) -> np.ndarray:
    """exp(i H t) approximated by a first-order product formula.

    Strings flagged inactive in the template are skipped, as are those
    with |coefficient| < coefficient_limit.  ``steps`` is the repetition
    count r; the factor angles use t / r.
    """
    if steps < 1:
        raise SolverError("trotter step count must be >= 1")
    dim = 1 << template.n_qubits
    terms = template.terms(active_only=True)
    if coefficient_limit > 0.0:
        terms = [t for t in terms if not abs(t[0]) < coefficient_limit]
    order = np.argsort(-np.abs([t[0] for t in terms]), kind="stable")
    step = np.eye(dim, dtype=np.complex128)
    # build by left-multiplication smallest-last so the largest-|alpha|
    # factor ends up leftmost in the product
    for idx in order[::-1]:
        alpha, x_mask, z_mask = terms[idx]
        perm, signs = string_action(x_mask, z_mask, template.n_qubits)
        theta = alpha * time_step / steps
        step = (np.cos(theta) * step
                + 1j * np.sin(theta) * (signs[:, None] * step[perm, :]))
    return np.linalg.matrix_power(step, steps)


def exact_unitary(matrix: SparseMatrix, time_step: float) -> np.ndarray:
    """exp(i H t) by symmetric eigendecomposition."""
    dense = matrix.to_dense()
    if not np.array_equal(dense, dense.T):
        raise SolverError("exact evolution needs a symmetric matrix")
    eigenvalues, vectors = np.linalg.eigh(dense)
    phases = np.exp(1j * eigenvalues * time_step)
    return (vectors * phases) @ vectors.T.conj()

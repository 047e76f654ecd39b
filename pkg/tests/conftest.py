"""Shared fixtures and independent oracle implementations.

The oracles here are deliberately naive re-implementations (scalar loops,
Kronecker products, textbook formulas) used to check the vectorized
package code against a second, independently written source of truth.
"""

from __future__ import annotations

import numpy as np
import pytest

from qcfd.config import CaseConfig
from qcfd.hybrid import sample_systems
from qcfd.lcu.clusters import symmetrize
from qcfd.lcu.decompose import decompose_hadamard
from qcfd.sparse import SparseMatrix

# ---------------------------------------------------------------------------
# oracles


def gs_oracle(matrix: SparseMatrix, rhs, x0=None, tol=1e-13, max_iter=1000):
    """Pure-Python forward Gauss-Seidel twin of the jitted kernel.

    Same arithmetic, same order, same stopping rule — results must agree
    with the production kernel bit for bit.
    """
    n = matrix.n
    x = [0.0] * n if x0 is None else [float(v) for v in x0]
    indptr, indices, values = matrix.indptr, matrix.indices, matrix.values
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
            xi = (rhs[i] - row_sum) / diag
            d = xi - x[i]
            acc += d * d
            x[i] = xi
        if (acc / n) ** 0.5 < tol:
            return np.array(x), it, True
    return np.array(x), max_iter, False


_PAULI_2x2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_pauli(label: str) -> np.ndarray:
    """Dense Pauli string from its label (leftmost letter = highest qubit)."""
    out = np.array([[1.0 + 0.0j]])
    for ch in label:
        out = np.kron(out, _PAULI_2x2[ch])
    return out


def kron_pauli_masks(x_mask: int, z_mask: int, n: int) -> np.ndarray:
    """Dense string from bit masks via the Kronecker oracle (qubit 0 = LSB)."""
    label = ""
    for q in reversed(range(n)):
        xb, zb = (x_mask >> q) & 1, (z_mask >> q) & 1
        label += {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(xb, zb)]
    return kron_pauli(label)


def random_embedded(rng: np.random.Generator, n_qubits: int,
                    density: float = 0.4) -> SparseMatrix:
    """Random [[0, A], [A^T, 0]] embedding of dimension 2**n_qubits."""
    half = 1 << (n_qubits - 1)
    mask = rng.random((half, half)) < density
    np.fill_diagonal(mask, True)  # keep it reasonably populated
    dense = np.where(mask, rng.standard_normal((half, half)), 0.0)
    return symmetrize(SparseMatrix.from_dense(dense, keep_zeros=False))


def walsh_matrix(n: int) -> np.ndarray:
    """Dense natural-order Walsh matrix W[z, k] = (-1)**popcount(z & k)."""
    dim = 1 << n
    z = np.arange(dim)[:, None]
    k = np.arange(dim)[None, :]
    bits = np.bitwise_count((z & k).astype(np.int64))
    return (-1.0) ** bits


# ---------------------------------------------------------------------------
# shared expensive fixtures


@pytest.fixture(scope="session")
def sample5():
    """5-node pressure-correction system captured at outer iteration 10."""
    config = CaseConfig(nodes_per_side=5, outer_max=11)
    return sample_systems(config, (10,))[10]


@pytest.fixture(scope="session")
def embedded5(sample5):
    return symmetrize(sample5.matrix)


@pytest.fixture(scope="session")
def template5(embedded5):
    return decompose_hadamard(embedded5)

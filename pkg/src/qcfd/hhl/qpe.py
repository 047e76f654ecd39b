"""Phase estimation on the clock register.

All operations act on the (ancilla, clock, input) grid view.  The
Hadamard layer is a normalized Walsh transform along the clock axis; the
controlled powers apply U^(2^c) to the input register on the rows whose
clock bit c is set; the final change of basis is an orthonormal DFT,
which np.fft supplies directly (inverse QFT == fft with norm="ortho"
under this bit convention, verified by the one-hot phase tests).
"""

from __future__ import annotations

import numpy as np

from .state import StateVector

__all__ = ["hadamard_clock", "controlled_powers", "qft_clock",
           "inverse_qft_clock", "apply_qpe", "apply_qpe_inverse",
           "clock_marginals"]

_INV_SQRT2 = 2.0 ** -0.5


def hadamard_clock(state: StateVector) -> None:
    """H on every clock qubit (in place)."""
    grid = state.grid
    size = grid.shape[1]
    half = 1
    while half < size:
        view = grid.reshape(2, size // (2 * half), 2, half, -1)
        top = view[:, :, 0].copy()
        view[:, :, 0] = (top + view[:, :, 1]) * _INV_SQRT2
        view[:, :, 1] = (top - view[:, :, 1]) * _INV_SQRT2
        half *= 2


def controlled_powers(state: StateVector, unitary: np.ndarray,
                      adjoint: bool = False) -> None:
    """For each clock bit c, apply U^(2^c) to the input register on the
    rows with that bit set.  Powers of one unitary commute, so the bit
    order is immaterial."""
    grid = state.grid
    power = unitary.conj().T if adjoint else unitary
    codes = np.arange(grid.shape[1])
    for c in range(state.n_clock):
        sel = (codes >> c) & 1 == 1
        grid[:, sel, :] = grid[:, sel, :] @ power.T
        power = power @ power


def qft_clock(state: StateVector) -> None:
    grid = state.grid
    grid[:] = np.fft.ifft(grid, axis=1, norm="ortho")


def inverse_qft_clock(state: StateVector) -> None:
    grid = state.grid
    grid[:] = np.fft.fft(grid, axis=1, norm="ortho")


def apply_qpe(state: StateVector, unitary: np.ndarray) -> None:
    """Hadamard layer, controlled powers, inverse QFT."""
    hadamard_clock(state)
    controlled_powers(state, unitary)
    inverse_qft_clock(state)


def apply_qpe_inverse(state: StateVector, unitary: np.ndarray) -> None:
    """Exact inverse of apply_qpe with the same unitary."""
    qft_clock(state)
    controlled_powers(state, unitary, adjoint=True)
    hadamard_clock(state)


def clock_marginals(state: StateVector) -> np.ndarray:
    """Probability of each clock code, input and ancilla traced out."""
    return np.sum(np.abs(state.grid) ** 2, axis=(0, 2))

"""Eigenvalue-conditioned ancilla rotation.

For every nonzero clock code the ancilla is rotated by
theta = arcsin(C / lambda~), writing amplitude C / lambda~ onto the
ancilla-1 branch (sign included, so negative eigenvalues invert with
their sign).  Code 0 is never rotated: it represents eigenvalue 0 and,
after uncompute, carries the garbage that did not decode.  A prune limit
skips codes whose clock marginal carries less probability than the
threshold, trading fidelity for fewer conditioned rotations.
"""

from __future__ import annotations

import numpy as np

from ..errors import SolverError
from .precision import Precision
from .qpe import clock_marginals
from .state import StateVector

__all__ = ["apply_eigeninversion"]


def apply_eigeninversion(state: StateVector, precision: Precision,
                         rotation_constant: float,
                         prune_limit: float = 0.0) -> int:
    """Rotate the ancilla per clock code; returns the rotation count."""
    if rotation_constant <= 0.0:
        raise SolverError("rotation constant must be positive")
    if rotation_constant > precision.resolution:
        raise SolverError(
            f"rotation constant {rotation_constant} exceeds the register "
            f"resolution {precision.resolution}; the arcsine argument would "
            "pass 1 at the smallest representable eigenvalue")
    grid = state.grid
    marginals = clock_marginals(state) if prune_limit > 0.0 else None
    rotations = 0
    for code in range(1, 1 << state.n_clock):
        if marginals is not None and marginals[code] < prune_limit:
            continue
        value = precision.value_of(code)
        ratio = rotation_constant / value
        if abs(ratio) > 1.0 + 1e-12:
            raise SolverError(
                f"rotation constant {rotation_constant} exceeds |eigenvalue| "
                f"{abs(value)} at code {code}; lower it")
        theta = np.arcsin(np.clip(ratio, -1.0, 1.0))
        a0 = grid[0, code, :].copy()
        a1 = grid[1, code, :].copy()
        grid[0, code, :] = np.cos(theta) * a0 - np.sin(theta) * a1
        grid[1, code, :] = np.sin(theta) * a0 + np.cos(theta) * a1
        rotations += 1
    return rotations

"""State preparation through a binary tree of controlled Ry rotations.

The angle at each internal node is theta = 2 * atan2(|right|, |left|)
computed from the subtree amplitude norms; applying the levels root to
leaf turns |0...0> into the magnitude profile, and a final sign flip per
leaf restores negative amplitudes.  For emulation each level is applied
vectorized rather than gate by gate, but the numbers are the tree's.
"""

from __future__ import annotations

import numpy as np

from ..errors import SolverError

__all__ = ["rotation_angles", "load_amplitudes"]


def rotation_angles(target: np.ndarray) -> list[np.ndarray]:
    """Per-level Ry angles, root level first (level l has 2**l nodes)."""
    target = np.asarray(target, dtype=np.float64)
    dim = target.size
    if dim & (dim - 1) or dim == 0:
        raise SolverError("loader needs a power-of-two amplitude count")
    norms = np.abs(target)
    levels: list[np.ndarray] = []
    while norms.size > 1:
        pairs = norms.reshape(-1, 2)
        levels.append(2.0 * np.arctan2(pairs[:, 1], pairs[:, 0]))
        norms = np.sqrt(np.sum(pairs * pairs, axis=1))
    levels.reverse()
    return levels


def load_amplitudes(target: np.ndarray) -> np.ndarray:
    """Normalized state equal (to rounding) to target / ||target||."""
    target = np.asarray(target, dtype=np.float64)
    total = np.linalg.norm(target)
    if total == 0.0:
        raise SolverError("cannot load the zero vector")
    amps = np.ones(1)
    for theta in rotation_angles(target):
        stacked = np.empty((amps.size, 2))
        stacked[:, 0] = amps * np.cos(theta / 2.0)
        stacked[:, 1] = amps * np.sin(theta / 2.0)
        amps = stacked.reshape(-1)
    return np.where(target < 0.0, -amps, amps)

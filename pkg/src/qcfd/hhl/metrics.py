"""Solution-quality measures between two real vectors."""

from __future__ import annotations

import numpy as np

from ..errors import SolverError

__all__ = ["fidelity", "error_norms"]


def _unit(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.float64)
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise SolverError("cannot compare against a zero vector")
    return vec / norm


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>| over normalized inputs (1 means same ray)."""
    return float(abs(np.dot(_unit(a), _unit(b))))


def error_norms(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """(L2, RMS) distance between the normalized vectors, sign-aligned."""
    ua, ub = _unit(a), _unit(b)
    if np.dot(ua, ub) < 0.0:
        ub = -ub
    l2 = float(np.linalg.norm(ua - ub))
    return l2, l2 / np.sqrt(ua.size)

"""Dense state vector over ancilla + clock + input registers.

Basis index layout (little-endian registers, input lowest):

    index = input + (clock << n_input) + (ancilla << (n_input + n_clock))

``grid`` exposes the same buffer as a (2, 2**n_clock, 2**n_input) view so
register-wise operations are plain axis operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["StateVector"]


@dataclass(eq=False)
class StateVector:
    n_input: int
    n_clock: int
    amps: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        size = 1 << (self.n_input + self.n_clock + 1)
        if self.amps is None:
            self.amps = np.zeros(size, dtype=np.complex128)
            self.amps[0] = 1.0
        elif self.amps.shape != (size,):
            raise ValueError("amplitude buffer has wrong length")

    @property
    def grid(self) -> np.ndarray:
        """(ancilla, clock, input) view sharing the buffer."""
        return self.amps.reshape(2, 1 << self.n_clock, 1 << self.n_input)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def ancilla_one_probability(self) -> float:
        return float(np.sum(np.abs(self.grid[1]) ** 2))

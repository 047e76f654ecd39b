"""Fixed-point eigenvalue register layout.

A precision spec "m.f" allocates m integer bits, f fraction bits, and one
sign bit: n_clock = m + f + 1.  Phase estimation with evolution time
t = 2*pi / 2**(m+1) writes the eigenvalue code

    code = round(lambda * 2**f)   (mod 2**n_clock, two's complement)

into the clock register, i.e. representable eigenvalues run from -2**m to
2**m - 2**-f in steps of 2**-f.  The default rotation constant equals the
resolution, so the smallest representable magnitude maps to a full
ancilla rotation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ConfigError

__all__ = ["Precision"]

_SPEC_RE = re.compile(r"^(\d+)\.(\d+)$")


@dataclass(frozen=True)
class Precision:
    integer_bits: int
    fraction_bits: int

    def __post_init__(self) -> None:
        if self.integer_bits < 0 or self.fraction_bits < 1:
            raise ConfigError("precision needs non-negative integer bits and "
                              "at least one fraction bit")
        if self.n_clock > 20:
            raise ConfigError(f"clock register of {self.n_clock} qubits is "
                              "beyond emulation range")

    @classmethod
    def parse(cls, text: str) -> "Precision":
        m = _SPEC_RE.match(text.strip())
        if not m:
            raise ConfigError(f"precision must look like '3.4', got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def n_clock(self) -> int:
        return self.integer_bits + self.fraction_bits + 1

    @property
    def evolution_time(self) -> float:
        return 6.283185307179586 / (1 << (self.integer_bits + 1))

    @property
    def resolution(self) -> float:
        return 2.0 ** (-self.fraction_bits)

    @property
    def min_value(self) -> float:
        return -float(1 << self.integer_bits)

    @property
    def max_value(self) -> float:
        return float(1 << self.integer_bits) - self.resolution

    @property
    def default_rotation_constant(self) -> float:
        return self.resolution

    def value_of(self, code: int) -> float:
        """Eigenvalue represented by a clock code (two's complement)."""
        size = 1 << self.n_clock
        if not 0 <= code < size:
            raise ConfigError(f"code {code} outside clock register")
        signed = code - size if code >= size // 2 else code
        return signed * self.resolution

    def code_of(self, value: float) -> int:
        """Nearest representable code of an eigenvalue (wraps like QPE)."""
        size = 1 << self.n_clock
        return int(round(value / self.resolution)) % size

    def __str__(self) -> str:
        return f"{self.integer_bits}.{self.fraction_bits}"

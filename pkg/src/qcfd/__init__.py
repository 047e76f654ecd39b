"""Hybrid quantum-classical workbench for the lid-driven cavity.

Three layers: a classical SIMPLE solver on a staggered mesh, a
Pauli-string LCU decomposition of the pressure-correction operator, and a
state-vector HHL emulator that replaces the classical inner solve.
"""

from .config import CaseConfig
from .errors import (ConfigError, DivergenceError, IoFormatError,
                     PatternMismatchError, QcfdError, ResourceLimitError,
                     SolverError)
from .sparse import SparseMatrix

__version__ = "0.1.0"

__all__ = [
    "CaseConfig", "SparseMatrix", "QcfdError", "ConfigError",
    "IoFormatError", "SolverError", "DivergenceError",
    "PatternMismatchError", "ResourceLimitError",
]

"""Emulated eigenvalue-inversion (HHL-style) linear solver."""

from .inversion import apply_eigeninversion
from .loader import load_amplitudes, rotation_angles
from .metrics import error_norms, fidelity
from .precision import Precision
from .qpe import (apply_qpe, apply_qpe_inverse, clock_marginals,
                  controlled_powers, hadamard_clock, inverse_qft_clock,
                  qft_clock)
from .solver import HhlConfig, HhlResult, hhl_solve
from .state import StateVector
from .trotter import build_trotter_unitary, exact_unitary

__all__ = [
    "HhlConfig", "HhlResult", "Precision", "StateVector",
    "apply_eigeninversion", "apply_qpe", "apply_qpe_inverse",
    "build_trotter_unitary", "clock_marginals", "controlled_powers",
    "error_norms", "exact_unitary", "fidelity", "hadamard_clock",
    "hhl_solve", "inverse_qft_clock", "load_amplitudes", "qft_clock",
    "rotation_angles",
]

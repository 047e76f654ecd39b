"""Case configuration for the lid-driven cavity runs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

__all__ = ["CaseConfig"]


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class CaseConfig:
    """Physical and numerical parameters of a cavity case.

    The mesh has ``nodes_per_side`` grid nodes along each edge of the unit
    square, i.e. ``nodes_per_side - 1`` cells per side; valid sizes are
    2**k + 1 with k >= 2 so the pressure system dimension is a power of two.

    Defaults reproduce the reference setup: unit density, viscosity 0.01 and
    unit lid speed (Reynolds number 100), inner solves pushed to near
    round-off.  ``relax_velocity`` under-relaxes the momentum equations
    implicitly (relaxed diagonal, source on the rhs); ``relax_pressure``
    scales the pressure update.  The velocity *corrections* are always
    applied in full.  The plain predictor-corrector loop with both factors
    at 1.0 is unstable for the cavity — the pressure-correction feedback
    overshoots and the outer iteration oscillates to divergence — so the
    defaults carry the mild classical factors that make every mesh in the
    benchmark range converge.
    """

    nodes_per_side: int = 5
    density: float = 1.0
    viscosity: float = 0.01
    lid_velocity: float = 1.0
    outer_max: int = 50_000
    outer_tol: float = 1e-12
    gs_tol: float = 1e-13
    gs_max: int = 1_000_000
    relax_velocity: float = 0.7
    relax_pressure: float = 0.3

    def __post_init__(self) -> None:
        cells = self.nodes_per_side - 1
        if cells < 4 or not _is_power_of_two(cells):
            raise ConfigError(
                f"nodes_per_side must be 2**k + 1 with k >= 2, "
                f"got {self.nodes_per_side}")
        if self.density <= 0 or self.viscosity <= 0:
            raise ConfigError("density and viscosity must be positive")
        if self.outer_max < 1 or self.gs_max < 1:
            raise ConfigError("iteration limits must be >= 1")
        if self.outer_tol <= 0 or self.gs_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if not (0 < self.relax_velocity <= 1 and 0 < self.relax_pressure <= 1):
            raise ConfigError("relaxation factors must lie in (0, 1]")

    @property
    def cells_per_side(self) -> int:
        return self.nodes_per_side - 1

    @property
    def spacing(self) -> float:
        return 1.0 / self.cells_per_side

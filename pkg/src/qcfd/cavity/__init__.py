"""Classical finite-volume side: staggered cavity mesh, assemblies and the
SIMPLE outer iteration."""

from .assembly import (ANCHOR_CELL, MomentumSystems, assemble_momentum,
                       assemble_pressure_correction, correct_fields,
                       mass_imbalance)
from .gauss_seidel import GsResult, gauss_seidel
from .mesh import FlowState, StaggeredMesh, flatten, unflatten
from .simple import (HISTORY_COLUMNS, IterationRecord, SimpleResult,
                     classical_pc_solver, rms, run_simple)

__all__ = [
    "ANCHOR_CELL", "MomentumSystems", "assemble_momentum",
    "assemble_pressure_correction", "correct_fields", "mass_imbalance",
    "GsResult", "gauss_seidel",
    "FlowState", "StaggeredMesh", "flatten", "unflatten",
    "HISTORY_COLUMNS", "IterationRecord", "SimpleResult",
    "classical_pc_solver", "rms", "run_simple",
]

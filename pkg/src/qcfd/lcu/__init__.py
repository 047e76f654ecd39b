"""Pauli-string linear-combination-of-unitaries decompositions."""

from .clusters import Cluster, build_cluster, find_clusters, symmetrize
from .decompose import (TRACE_FULL_SCAN_MAX_QUBITS, ZERO_TOLERANCE,
                        LcuTemplate, decompose_hadamard, decompose_trace,
                        filter_by_coefficient, fwht, load_template,
                        reevaluate, save_template)
from .entrywise import OneSparseLcu, OneSparseTerm, decompose_entrywise
from .strings import PauliString, pauli_dense, popcount, string_action, \
    string_matrix

__all__ = [
    "Cluster", "LcuTemplate", "OneSparseLcu", "OneSparseTerm", "PauliString",
    "TRACE_FULL_SCAN_MAX_QUBITS", "ZERO_TOLERANCE", "build_cluster",
    "decompose_entrywise", "decompose_hadamard", "decompose_trace",
    "filter_by_coefficient", "find_clusters", "fwht", "load_template",
    "pauli_dense", "popcount", "reevaluate", "save_template",
    "string_action", "string_matrix", "symmetrize",
]

"""Pauli-string decompositions of real symmetric sparse matrices.

Two routes produce the same template:

* ``decompose_hadamard`` — cluster grand sums.  Gather each cluster's
  diagonal-of-permutation vector h[k] = H[k, k ^ x] (missing entries are
  zero), then evaluate all member coefficients at once:

      alpha = S @ h / 2**n

  where S is the cluster's ±1 sign table.  Because S's rows are Walsh
  functions indexed by z-mask (up to the global iy sign), the product is
  computed with a fast Walsh–Hadamard transform of h instead of an
  explicit matmul — identical numbers, N log N work per cluster.

* ``decompose_trace`` — the textbook per-string inner product
  alpha = Tr(P H) / 2**n, evaluated string by string with fresh pattern
  lookups each time.  Exhaustive scan over all 4**n strings is capped at
  n <= 6 as a reference mode; above that only the pattern-selected masks
  are scanned.

A template remembers the source pattern (digest plus gather positions),
so later matrices with the same pattern refresh coefficients via
``reevaluate`` at transform cost with no rediscovery work.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import (ConfigError, PatternMismatchError, ResourceLimitError,
                      SolverError)
from ..sparse import SparseMatrix
from .clusters import Cluster, _qubit_count, build_cluster, find_clusters
from .strings import popcount

__all__ = ["LcuTemplate", "fwht", "decompose_hadamard", "decompose_trace",
           "reevaluate", "filter_by_coefficient", "save_template",
           "load_template", "ZERO_TOLERANCE", "TRACE_FULL_SCAN_MAX_QUBITS"]

ZERO_TOLERANCE = 1e-14
TRACE_FULL_SCAN_MAX_QUBITS = 6
_FORMAT_VERSION = 1


def fwht(vec: np.ndarray) -> np.ndarray:
    """Fast Walsh–Hadamard transform along the last axis (natural order).

    out[z] = sum_k (-1)**popcount(z & k) * vec[k]; involutive up to 1/N.
    """
    v = np.array(vec, dtype=np.float64)
    dim = v.shape[-1]
    if dim & (dim - 1):
        raise SolverError("transform length must be a power of two")
    half = 1
    while half < dim:
        v = v.reshape(v.shape[:-1] + (dim // (2 * half), 2, half))
        top = v[..., 0, :].copy()
        v[..., 0, :] = top + v[..., 1, :]
        v[..., 1, :] = top - v[..., 1, :]
        v = v.reshape(v.shape[:-3] + (dim,))
        half *= 2
    return v


@dataclass(eq=False)
class LcuTemplate:
    """Clustered Pauli-string expansion of one sparse symmetric pattern.

    Coefficients (and their flags) are stored as one vector over the
    concatenated cluster members; ``offsets`` delimits cluster b as the
    slice [offsets[b], offsets[b+1]).  ``gather_positions`` maps each
    cluster's permutation diagonal into the source value array (-1 marks
    an absent entry, read as zero), which is what makes re-evaluation a
    pure gather-plus-transform.
    """

    n_qubits: int
    pattern_digest: str
    clusters: list[Cluster]
    offsets: np.ndarray            # int64, shape (B + 1,)
    gather_positions: np.ndarray   # int64, shape (B, 2**n)
    coefficients: np.ndarray       # float64, concatenated members
    zero_flags: np.ndarray         # bool: |alpha| <= ZERO_TOLERANCE
    active_flags: np.ndarray       # bool: nonzero and unfiltered
    method: str = "hadamard"
    filter_limit: float = 0.0
    build_seconds: float = 0.0
    source_dim: int = 0
    source_nnz: int = 0
    # Lazy caches for the re-evaluation fast path (see _member_maps).
    _member_index: np.ndarray | None = field(default=None, repr=False)
    _member_scale: np.ndarray | None = field(default=None, repr=False)
    _value_buffer: np.ndarray | None = field(default=None, repr=False)

    @property
    def cluster_count(self) -> int:
        return len(self.clusters)

    @property
    def candidate_count(self) -> int:
        return int(self.offsets[-1])

    @property
    def nonzero_count(self) -> int:
        return int(np.count_nonzero(~self.zero_flags))

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.active_flags))

    def cluster_coefficients(self, b: int) -> np.ndarray:
        return self.coefficients[self.offsets[b]:self.offsets[b + 1]]

    def terms(self, active_only: bool = False
              ) -> list[tuple[float, int, int]]:
        """Flat (coefficient, x_mask, z_mask) list, cluster order."""
        out = []
        for b, cluster in enumerate(self.clusters):
            alphas = self.cluster_coefficients(b)
            act = self.active_flags[self.offsets[b]:self.offsets[b + 1]]
            for a, z, keep in zip(alphas, cluster.z_masks, act):
                if active_only and not keep:
                    continue
                out.append((float(a), cluster.x_mask, int(z)))
        return out

    def _member_maps(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flat gather index and pre-scaled signs over all members.

        Member (b, z) reads its coefficient from the transformed gather
        table at flat position b * 2**n + z, scaled by iy / 2**n; both
        maps depend only on the cluster layout, so they are built once.
        The value buffer is the padded source-value slot reused between
        re-evaluations.
        """
        if self._member_index is None:
            dim = 1 << self.n_qubits
            if self.clusters:
                self._member_index = np.concatenate(
                    [b * dim + cl.z_masks
                     for b, cl in enumerate(self.clusters)])
                self._member_scale = np.concatenate(
                    [cl.iy_signs.astype(np.float64) / dim
                     for cl in self.clusters])
            else:
                self._member_index = np.zeros(0, dtype=np.int64)
                self._member_scale = np.zeros(0)
            self._value_buffer = np.zeros(self.source_nnz + 1)
        return self._member_index, self._member_scale, self._value_buffer

    def reconstruct_dense(self, active_only: bool = False) -> np.ndarray:
        """Sum of coefficient * string over (active) members, as dense."""
        dim = 1 << self.n_qubits
        out = np.zeros((dim, dim))
        cols = np.arange(dim, dtype=np.int64)
        for b, cluster in enumerate(self.clusters):
            alphas = self.cluster_coefficients(b).copy()
            if active_only:
                sel = self.active_flags[self.offsets[b]:self.offsets[b + 1]]
                alphas[~sel] = 0.0
            rows = cols ^ cluster.x_mask
            out[rows, cols] += alphas @ cluster.sign_rows()
        return out


def _require_symmetric(matrix: SparseMatrix) -> None:
    rows = matrix.row_index
    pos_t = matrix.entry_positions(matrix.indices, rows)
    if np.any(pos_t < 0) or not np.array_equal(matrix.values,
                                               matrix.values[pos_t]):
        raise SolverError("matrix is not symmetric; embed it with "
                          "symmetrize() before decomposing")


def _gather_table(matrix: SparseMatrix, masks: list[int]
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Per-mask positions of h[k] = H[k, k ^ x] plus values with a
    trailing zero slot so position -1 gathers 0."""
    dim = matrix.n
    rows = np.arange(dim, dtype=np.int64)
    gather = np.empty((len(masks), dim), dtype=np.int64)
    for b, x in enumerate(masks):
        gather[b] = matrix.entry_positions(rows, rows ^ x)
    padded = np.append(matrix.values, 0.0)
    return gather, padded


def _coefficients_from_rows(clusters: list[Cluster], h_rows: np.ndarray,
                            n_qubits: int) -> np.ndarray:
    transformed = fwht(h_rows)
    dim = 1 << n_qubits
    parts = [cl.iy_signs * transformed[b, cl.z_masks] / dim
             for b, cl in enumerate(clusters)]
    return np.concatenate(parts) if parts else np.zeros(0)


def _verify_reconstruction(clusters: list[Cluster], offsets: np.ndarray,
                           coefficients: np.ndarray, h_rows: np.ndarray,
                           n_qubits: int) -> None:
    """Check that the expansion reproduces every gathered diagonal.

    The inverse transform of the coefficient spectrum must return h
    exactly when H is symmetric; a residual above tolerance means the
    input broke the symmetry assumption somewhere past the pattern check.
    """
    dim = 1 << n_qubits
    spectrum = np.zeros((len(clusters), dim))
    for b, cl in enumerate(clusters):
        spectrum[b, cl.z_masks] = (cl.iy_signs
                                   * coefficients[offsets[b]:offsets[b + 1]])
    residual = np.abs(fwht(spectrum) - h_rows).max() if clusters else 0.0
    if residual > 1e-12:
        raise SolverError(f"decomposition failed verification: max "
                          f"reconstruction residual {residual:.3e}")


def _flags(coefficients: np.ndarray, limit: float
           ) -> tuple[np.ndarray, np.ndarray]:
    zero = np.abs(coefficients) <= ZERO_TOLERANCE
    active = ~zero
    if limit > 0.0:
        active &= ~(np.abs(coefficients) < limit)
    return zero, active


def decompose_hadamard(matrix: SparseMatrix) -> LcuTemplate:
    """Cluster grand-sum decomposition of a symmetric power-of-two matrix."""
    t0 = time.perf_counter()
    n_qubits = _qubit_count(matrix.n)
    _require_symmetric(matrix)
    masks = find_clusters(matrix)
    clusters = [build_cluster(x, n_qubits) for x in masks]
    offsets = np.zeros(len(clusters) + 1, dtype=np.int64)
    np.cumsum([cl.member_count for cl in clusters], out=offsets[1:])
    gather, padded = _gather_table(matrix, masks)
    h_rows = padded[gather]
    coefficients = _coefficients_from_rows(clusters, h_rows, n_qubits)
    _verify_reconstruction(clusters, offsets, coefficients, h_rows, n_qubits)
    zero, active = _flags(coefficients, 0.0)
    return LcuTemplate(n_qubits, matrix.pattern_digest, clusters, offsets,
                       gather, coefficients, zero, active,
                       method="hadamard",
                       build_seconds=time.perf_counter() - t0,
                       source_dim=matrix.n, source_nnz=matrix.nnz)


def decompose_trace(matrix: SparseMatrix, scan: str = "auto") -> LcuTemplate:
    """Per-string trace inner products, one pattern lookup pass per string.

    ``scan`` chooses the candidate set: "masks" restricts to x-masks seen
    in the pattern, "full" sweeps all 4**n strings (reference mode, capped
    at n <= 6), "auto" picks "full" when it is affordable.
    """
    t0 = time.perf_counter()
    n_qubits = _qubit_count(matrix.n)
    _require_symmetric(matrix)
    if scan not in ("auto", "full", "masks"):
        raise ConfigError(f"unknown scan mode {scan!r}")
    if scan == "auto":
        scan = "full" if n_qubits <= TRACE_FULL_SCAN_MAX_QUBITS else "masks"
    if scan == "full" and n_qubits > TRACE_FULL_SCAN_MAX_QUBITS:
        raise ResourceLimitError(
            f"full trace scan over 4**{n_qubits} strings refused (cap is "
            f"{TRACE_FULL_SCAN_MAX_QUBITS} qubits); use scan='masks', or "
            "decompose_hadamard for the cluster route")
    dim = matrix.n
    rows = np.arange(dim, dtype=np.int64)
    padded = np.append(matrix.values, 0.0)
    masks = (list(range(dim)) if scan == "full" else find_clusters(matrix))
    clusters = [build_cluster(x, n_qubits) for x in masks]
    offsets = np.zeros(len(clusters) + 1, dtype=np.int64)
    np.cumsum([cl.member_count for cl in clusters], out=offsets[1:])
    coefficients = np.empty(int(offsets[-1]))
    pos = 0
    for cluster in clusters:
        cols = rows ^ cluster.x_mask
        for z, iy in zip(cluster.z_masks, cluster.iy_signs):
            # deliberately per string: fresh lookup, no sharing with peers
            entries = padded[matrix.entry_positions(rows, cols)]
            signs = int(iy) * (1.0 - 2.0 * (popcount(cols & int(z)) & 1))
            coefficients[pos] = signs @ entries / dim
            pos += 1
    gather, padded = _gather_table(matrix, masks)
    _verify_reconstruction(clusters, offsets, coefficients, padded[gather],
                           n_qubits)
    zero, active = _flags(coefficients, 0.0)
    return LcuTemplate(n_qubits, matrix.pattern_digest, clusters, offsets,
                       gather, coefficients, zero, active,
                       method=f"trace[{scan}]",
                       build_seconds=time.perf_counter() - t0,
                       source_dim=matrix.n, source_nnz=matrix.nnz)


def reevaluate(template: LcuTemplate, matrix: SparseMatrix) -> LcuTemplate:
    """Refresh coefficients from a same-pattern matrix, in place.

    Only values may differ from the matrix the template was built on; a
    changed pattern raises PatternMismatchError (build a new template).
    """
    if matrix.pattern_digest != template.pattern_digest:
        raise PatternMismatchError(
            "matrix sparsity pattern differs from the template's source; "
            "re-decompose instead of re-evaluating")
    index, scale, padded = template._member_maps()
    padded[:-1] = matrix.values
    transformed = fwht(padded[template.gather_positions])
    np.multiply(transformed.reshape(-1)[index], scale,
                out=template.coefficients)
    zero, active = _flags(template.coefficients, template.filter_limit)
    template.zero_flags[:] = zero
    template.active_flags[:] = active
    return template


def filter_by_coefficient(template: LcuTemplate, limit: float) -> LcuTemplate:
    """New template view flagging members with |alpha| < limit inactive.

    Shares cluster data and coefficients with the source; only the flags
    are fresh.  limit == 0 keeps every nonzero member active.  Dropping
    the inactive members perturbs the reconstruction by at most
    limit * (number dropped) in max norm.
    """
    if limit < 0.0:
        raise ConfigError("coefficient filter limit must be >= 0")
    zero, active = _flags(template.coefficients, limit)
    return replace(template, zero_flags=zero, active_flags=active,
                   filter_limit=float(limit))


def save_template(template: LcuTemplate, path) -> None:
    """Serialize to a single .npz archive (portable, versioned)."""
    np.savez_compressed(
        path,
        format_version=np.int64(_FORMAT_VERSION),
        n_qubits=np.int64(template.n_qubits),
        pattern_digest=np.bytes_(template.pattern_digest.encode()),
        method=np.bytes_(template.method.encode()),
        filter_limit=np.float64(template.filter_limit),
        build_seconds=np.float64(template.build_seconds),
        source_dim=np.int64(template.source_dim),
        source_nnz=np.int64(template.source_nnz),
        masks=np.array([cl.x_mask for cl in template.clusters],
                       dtype=np.int64),
        offsets=template.offsets,
        z_masks=np.concatenate([cl.z_masks for cl in template.clusters])
        if template.clusters else np.zeros(0, dtype=np.int64),
        iy_signs=np.concatenate([cl.iy_signs for cl in template.clusters])
        if template.clusters else np.zeros(0, dtype=np.int8),
        packed_signs=np.concatenate([cl.packed_signs
                                     for cl in template.clusters], axis=0)
        if template.clusters else np.zeros((0, 1), dtype=np.uint8),
        gather_positions=template.gather_positions,
        coefficients=template.coefficients,
        zero_flags=template.zero_flags,
        active_flags=template.active_flags,
    )


def load_template(path) -> LcuTemplate:
    with np.load(path) as data:
        version = int(data["format_version"])
        if version != _FORMAT_VERSION:
            raise SolverError(f"unsupported template format version "
                              f"{version} (expected {_FORMAT_VERSION})")
        n_qubits = int(data["n_qubits"])
        offsets = data["offsets"]
        masks = data["masks"]
        z_all = data["z_masks"]
        iy_all = data["iy_signs"]
        packed_all = data["packed_signs"]
        clusters = [
            Cluster(n_qubits, int(x),
                    z_all[offsets[b]:offsets[b + 1]],
                    iy_all[offsets[b]:offsets[b + 1]],
                    packed_all[offsets[b]:offsets[b + 1]])
            for b, x in enumerate(masks)
        ]
        return LcuTemplate(
            n_qubits, data["pattern_digest"].item().decode(), clusters,
            offsets, data["gather_positions"], data["coefficients"],
            data["zero_flags"], data["active_flags"],
            method=data["method"].item().decode(),
            filter_limit=float(data["filter_limit"]),
            build_seconds=float(data["build_seconds"]),
            source_dim=int(data["source_dim"]),
            source_nnz=int(data["source_nnz"]),
        )

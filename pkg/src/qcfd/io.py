"""File formats: Matrix Market matrices, headed vectors, CSV tables.

The matrix writer keeps explicitly stored zeros and the exact stored
entry order, so a round trip preserves the sparsity pattern bit-for-bit
(pattern digests survive export/import).  Vectors are plain text with a
one-line ``length  # comment`` header.  CSV helpers pin the column
schemas used across the package and render aligned text tables from the
same rows.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import IoFormatError
from .sparse import SparseMatrix

__all__ = ["write_matrix_market", "read_matrix_market", "write_vector",
           "read_vector", "write_csv", "read_csv", "render_table"]

_MM_HEADER = "%%MatrixMarket matrix coordinate real general"


def write_matrix_market(path, matrix: SparseMatrix,
                        comment: Optional[str] = None) -> None:
    lines = [_MM_HEADER]
    if comment:
        lines.extend(f"% {line}" for line in comment.splitlines())
    lines.append(f"{matrix.n} {matrix.n} {matrix.nnz}")
    rows = matrix.row_index
    for r, c, v in zip(rows, matrix.indices, matrix.values):
        lines.append(f"{r + 1} {c + 1} {float(v)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_market(path) -> SparseMatrix:
    try:
        raw = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IoFormatError(f"cannot read {path}: {exc}") from exc
    if not raw or not raw[0].startswith("%%MatrixMarket"):
        raise IoFormatError(f"{path}: missing MatrixMarket banner")
    tokens = raw[0].lower().split()
    if tokens[1:5] != ["matrix", "coordinate", "real", "general"]:
        raise IoFormatError(f"{path}: only 'matrix coordinate real general' "
                            "is supported")
    body = [line for line in raw[1:] if line.strip()
            and not line.lstrip().startswith("%")]
    if not body:
        raise IoFormatError(f"{path}: missing size line")
    try:
        n_rows, n_cols, nnz = (int(t) for t in body[0].split())
    except ValueError as exc:
        raise IoFormatError(f"{path}: bad size line {body[0]!r}") from exc
    if n_rows != n_cols:
        raise IoFormatError(f"{path}: matrix must be square, "
                            f"got {n_rows}x{n_cols}")
    entries = body[1:]
    if len(entries) != nnz:
        raise IoFormatError(f"{path}: header promises {nnz} entries, "
                            f"found {len(entries)}")
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz)
    for i, line in enumerate(entries):
        parts = line.split()
        if len(parts) != 3:
            raise IoFormatError(f"{path}: bad entry line {line!r}")
        rows[i] = int(parts[0]) - 1
        cols[i] = int(parts[1]) - 1
        vals[i] = float(parts[2])
    if nnz and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n_rows
                or cols.max() >= n_cols):
        raise IoFormatError(f"{path}: entry index out of range")
    return SparseMatrix.from_coo(n_rows, rows, cols, vals)


def write_vector(path, vector: np.ndarray,
                 comment: Optional[str] = None) -> None:
    vector = np.asarray(vector, dtype=np.float64)
    header = f"{vector.size}" + (f"  # {comment}" if comment else "")
    lines = [header] + [repr(float(v)) for v in vector]
    Path(path).write_text("\n".join(lines) + "\n")


def read_vector(path) -> np.ndarray:
    try:
        raw = Path(path).read_text().split("\n")
    except OSError as exc:
        raise IoFormatError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise IoFormatError(f"{path}: empty vector file")
    head = raw[0].split("#")[0].split()
    if len(head) != 1:
        raise IoFormatError(f"{path}: first line must hold the length")
    try:
        length = int(head[0])
    except ValueError as exc:
        raise IoFormatError(f"{path}: bad length {raw[0]!r}") from exc
    values = []
    for line in raw[1:]:
        stripped = line.split("#")[0].strip()
        if stripped:
            values.extend(float(t) for t in stripped.split())
    if len(values) != length:
        raise IoFormatError(f"{path}: header promises {length} values, "
                            f"found {len(values)}")
    return np.array(values)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        rows = list(reader)
    if not rows:
        raise IoFormatError(f"{path}: empty CSV")
    return rows[0], rows[1:]


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Aligned plain-text table matching the CSV contents."""
    text_rows = [[_cell(v) for v in row] for row in rows]
    widths = [len(h) for h in header]
    for row in text_rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return "  ".join(c.rjust(w) for c, w in zip(cells, widths))
    out = [line(header), line("-" * w for w in widths)]
    out.extend(line(row) for row in text_rows)
    return "\n".join(out)

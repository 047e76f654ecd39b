"""File formats: matrix, vector, and CSV round trips plus error paths."""

import numpy as np
import pytest

from conftest import gs_oracle
from qcfd.errors import IoFormatError
from qcfd.io import (read_csv, read_matrix_market, read_vector, render_table,
                     write_csv, write_matrix_market, write_vector)
from qcfd.sparse import SparseMatrix


def test_matrix_round_trip_keeps_explicit_zeros_and_digest(tmp_path):
    dense = np.array([[2.0, -1.0, 0.0, 0.0],
                      [-1.0, 2.0, -1.0, 0.0],
                      [0.0, -1.0, 2.0, 0.0],
                      [0.0, 0.0, 0.0, 1.0]])
    matrix = SparseMatrix.from_dense(dense, keep_zeros=False)
    anchored = matrix.with_values(
        np.where(np.arange(matrix.nnz) == 2, 0.0, matrix.values))
    path = tmp_path / "m.mtx"
    write_matrix_market(path, anchored, comment="anchored row demo")
    loaded = read_matrix_market(path)
    assert loaded.n == anchored.n
    assert loaded.nnz == anchored.nnz           # explicit zero survived
    assert loaded.pattern_digest == anchored.pattern_digest
    np.testing.assert_array_equal(loaded.values, anchored.values)
    np.testing.assert_array_equal(loaded.indices, anchored.indices)


def test_matrix_round_trip_is_bitwise_for_awkward_floats(tmp_path):
    values = np.array([1 / 3, np.pi, -1e-300, 6.02e23])
    matrix = SparseMatrix.from_coo(4, [0, 1, 2, 3], [0, 1, 2, 3], values)
    path = tmp_path / "m.mtx"
    write_matrix_market(path, matrix)
    np.testing.assert_array_equal(read_matrix_market(path).values, values)


def test_pc_system_round_trip_preserves_the_solution(tmp_path, sample5):
    write_matrix_market(tmp_path / "a.mtx", sample5.matrix)
    write_vector(tmp_path / "b.vec", sample5.rhs, comment="pc rhs")
    matrix = read_matrix_market(tmp_path / "a.mtx")
    rhs = read_vector(tmp_path / "b.vec")
    assert matrix.pattern_digest == sample5.matrix.pattern_digest
    x, _, converged = gs_oracle(matrix, rhs, tol=1e-13, max_iter=100_000)
    assert converged
    assert np.abs(matrix.matvec(x) - rhs).max() <= 1e-9


@pytest.mark.parametrize("text, message", [
    ("", "banner"),
    ("%%MatrixMarket matrix array real general\n2 2 0\n", "supported"),
    ("%%MatrixMarket matrix coordinate real general\n", "size line"),
    ("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 5.0\n",
     "square"),
    ("%%MatrixMarket matrix coordinate real general\nx y z\n", "size line"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5.0\n",
     "entries"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1\n", "entry"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n",
     "range"),
])
def test_matrix_reader_rejects_malformed_files(tmp_path, text, message):
    path = tmp_path / "bad.mtx"
    path.write_text(text)
    with pytest.raises(IoFormatError, match=message):
        read_matrix_market(path)


def test_matrix_reader_skips_comment_lines(tmp_path):
    path = tmp_path / "c.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "% a comment\n\n2 2 1\n% another\n2 1 -3.5\n")
    matrix = read_matrix_market(path)
    assert matrix.n == 2 and matrix.nnz == 1
    assert matrix.to_dense()[1, 0] == -3.5


def test_vector_round_trip_with_comment(tmp_path):
    vec = np.array([0.1, -2.5, 1 / 7, 0.0])
    path = tmp_path / "v.vec"
    write_vector(path, vec, comment="sampled rhs")
    assert "# sampled rhs" in path.read_text().splitlines()[0]
    np.testing.assert_array_equal(read_vector(path), vec)


@pytest.mark.parametrize("text, message", [
    ("three\n1.0\n", "length"),
    ("2 4\n1.0\n2.0\n", "first line"),
    ("3\n1.0\n2.0\n", "promises"),
    ("1\n1.0\n2.0\n", "promises"),
])
def test_vector_reader_rejects_malformed_files(tmp_path, text, message):
    path = tmp_path / "bad.vec"
    path.write_text(text)
    with pytest.raises(IoFormatError, match=message):
        read_vector(path)


def test_missing_files_raise_io_errors(tmp_path):
    with pytest.raises(IoFormatError, match="cannot read"):
        read_matrix_market(tmp_path / "absent.mtx")
    with pytest.raises(IoFormatError, match="cannot read"):
        read_vector(tmp_path / "absent.vec")


def test_csv_round_trip_and_empty_rejection(tmp_path):
    header = ["mesh", "count", "seconds"]
    rows = [[5, 63, 0.125], [9, 319, 1.5]]
    path = tmp_path / "t.csv"
    write_csv(path, header, rows)
    got_header, got_rows = read_csv(path)
    assert got_header == header
    assert got_rows == [["5", "63", "0.125"], ["9", "319", "1.5"]]
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(IoFormatError):
        read_csv(empty)


def test_render_table_golden():
    out = render_table(["mesh", "count"], [[5, 63], [33, 7167]])
    assert out == ("mesh  count\n"
                   "----  -----\n"
                   "   5     63\n"
                   "  33   7167")


def test_render_table_formats_floats_compactly():
    out = render_table(["x"], [[0.123456789], [1234567.0]])
    lines = out.splitlines()
    assert lines[2].strip() == "0.123457"
    assert lines[3].strip() == "1.23457e+06"

# test_file_service.py - matrix, signal, vector and JSON files
import os

import numpy as np
import pytest

from app.middleware.exception import DimensionMismatchError, InvalidSpecError
from app.services import file_service
from app.services.dictionary import DictionarySpec, generate
from app.services.signals import random_sparse_signal


def test_matrix_file_is_bit_exact(tmp_path):
    A = generate(DictionarySpec(m=7, n=11, kind="correlated", T=4.0, seed=3))
    path = file_service.save_matrix(A, str(tmp_path / "A.csv"))
    with open(path) as f:
        assert f.readline().strip() == "7,11"
    np.testing.assert_array_equal(file_service.load_matrix(path).entries, A.entries)


def test_signal_file_is_bit_exact(tmp_path):
    x = random_sparse_signal(30, 4, seed=8)
    path = file_service.save_signal(x, str(tmp_path / "x.csv"))
    with open(path) as f:
        lines = f.read().splitlines()
    assert lines[0] == "30,4"
    assert len(lines) == 5
    loaded = file_service.load_signal(path)
    np.testing.assert_array_equal(loaded.support, x.support)
    np.testing.assert_array_equal(loaded.values, x.values)


def test_vector_file(tmp_path):
    v = np.array([0.1, -2.0, 1e-300])
    path = file_service.save_vector(v, str(tmp_path / "y.txt"))
    np.testing.assert_array_equal(file_service.load_vector(path), v)
    with pytest.raises(DimensionMismatchError):
        file_service.load_vector(path, length=4)


def test_fixtures_load(data_dir):
    A = file_service.load_matrix(os.path.join(data_dir, "orthonormal_4x4.csv"))
    x = file_service.load_signal(os.path.join(data_dir, "orthonormal_signal.csv"))
    assert (A.m, A.n) == (4, 4)
    assert x.support.tolist() == [1, 3]


@pytest.mark.parametrize(
    "content",
    [
        "",
        "2\n1,0\n0,1\n",
        "2,2\n1,0\n",
        "2,2\n1,0\n0,1,0\n",
        "2,2\n1,0\n0,abc\n",
        "2.5,2\n1,0\n0,1\n",
        "2,2\n",
    ],
)
def test_malformed_matrix(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(InvalidSpecError):
        file_service.load_matrix(str(path))


def test_matrix_columns_must_be_normalized(tmp_path):
    path = tmp_path / "raw.csv"
    path.write_text("2,2\n3,0\n4,2\n")
    with pytest.raises(InvalidSpecError):
        file_service.load_matrix(str(path))
    A = file_service.load_matrix(str(path), normalize=True)
    np.testing.assert_allclose(A.entries[:, 0], [0.6, 0.8])


@pytest.mark.parametrize("content", ["5,2\n1,1.0\n", "5,1\n1\n", "5,1\nx,1.0\n", "5,1\n1.5,2.0\n", ""])
def test_malformed_signal(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(InvalidSpecError):
        file_service.load_signal(str(path))


def test_json_round_trip(tmp_path):
    data = {"a": [1, 2], "b": {"c": None}}
    path = file_service.save_json(data, str(tmp_path / "nested" / "r.json"))
    assert file_service.load_json(path) == data


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(IOError):
        file_service.load_json(str(tmp_path / "missing.json"))
    with pytest.raises(IOError):
        file_service.load_matrix(str(tmp_path / "missing.csv"))


def test_matrix_file_layout(tmp_path):
    path = file_service.save_matrix(np.array([[0.1, 1.0], [-2.5, 0.25]]), str(tmp_path / "M.csv"))
    with open(path) as f:
        assert f.read() == "2,2\n0.10000000000000001,1\n-2.5,0.25\n"


def test_single_column_and_single_row_matrices(tmp_path):
    column = file_service.save_matrix(np.array([[0.6], [0.8]]), str(tmp_path / "col.csv"))
    row = file_service.save_matrix(np.array([[1.0, -1.0, 1.0]]), str(tmp_path / "row.csv"))
    assert (file_service.load_matrix(column).m, file_service.load_matrix(column).n) == (2, 1)
    assert file_service.load_matrix(row).entries.shape == (1, 3)


def test_vector_header_must_match(tmp_path):
    path = tmp_path / "y.txt"
    path.write_text("3\n1.0\n2.0\n")
    with pytest.raises(InvalidSpecError):
        file_service.load_vector(str(path))

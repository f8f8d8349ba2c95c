# conftest.py - shared fixtures
import os

import pytest

from app.services import file_service
from app.services.dictionary import DictionarySpec, generate
from app.services.signals import measure, random_sparse_signal

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "app", "data")
SWEEPS_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "app", "config", "sweeps")


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def sweeps_dir():
    return SWEEPS_DIR


@pytest.fixture
def orthonormal():
    return file_service.load_matrix(os.path.join(DATA_DIR, "orthonormal_4x4.csv"))


@pytest.fixture
def coherent_pair():
    """Two unit columns with inner product 0.5"""
    return file_service.load_matrix(os.path.join(DATA_DIR, "coherent_pair.csv"))


@pytest.fixture
def gaussian_matrix():
    return generate(DictionarySpec(m=64, n=128, seed=7))


@pytest.fixture
def small_matrix():
    """Small enough for exhaustive RIC enumeration"""
    return generate(DictionarySpec(m=24, n=10, seed=3))


@pytest.fixture
def gaussian_problem(gaussian_matrix):
    x = random_sparse_signal(gaussian_matrix.n, 5, seed=11)
    return gaussian_matrix, x, measure(gaussian_matrix, x)


# test_dictionary.py - random dictionaries and coherence
import numpy as np
import pytest

from app.middleware.exception import DimensionMismatchError, InvalidSpecError
from app.services.dictionary import DictionaryKind, DictionarySpec, coherence, generate, mean_coherence
from app.services.random_streams import derive_seed, stream


def test_columns_have_unit_norm():
    A = generate(DictionarySpec(m=30, n=80, seed=1))
    np.testing.assert_allclose(np.linalg.norm(A.entries, axis=0), 1.0, atol=1e-12)
    assert (A.m, A.n) == (30, 80)


def test_same_seed_same_matrix():
    spec = DictionarySpec(m=16, n=40, kind="correlated", T=4.0, seed=123)
    np.testing.assert_array_equal(generate(spec).entries, generate(spec).entries)


def test_different_seed_different_matrix():
    a = generate(DictionarySpec(m=16, n=40, seed=1)).entries
    b = generate(DictionarySpec(m=16, n=40, seed=2)).entries
    assert not np.array_equal(a, b)


def test_gaussian_draw_is_column_major_stream():
    spec = DictionarySpec(m=5, n=3, seed=9)
    raw = stream(9, 0).standard_normal(15).reshape(3, 5).T
    expected = raw / np.linalg.norm(raw, axis=0)
    np.testing.assert_allclose(generate(spec).entries, expected, atol=1e-14)


def test_for_level_picks_kind():
    assert DictionarySpec.for_level(8, 16, 0, seed=0).kind is DictionaryKind.GAUSSIAN
    assert DictionarySpec.for_level(8, 16, 4, seed=0).kind is DictionaryKind.CORRELATED


@pytest.mark.parametrize(
    "kwargs",
    [
        {"m": 0, "n": 4},
        {"m": 4, "n": 0},
        {"m": 4, "n": 8, "kind": "correlated", "T": -1.0},
        {"m": 4, "n": 8, "T": 2.0},
        {"m": 4, "n": 8, "seed": -1},
        {"m": 4, "n": 8, "seed": 2**64},
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(InvalidSpecError):
        DictionarySpec(**kwargs)


def test_coherence_of_known_pair(coherent_pair):
    assert coherence(coherent_pair) == pytest.approx(0.5)
    assert mean_coherence(coherent_pair) == pytest.approx(0.5)


def test_coherence_of_identity_is_zero(orthonormal):
    assert coherence(orthonormal) == 0.0


def test_coherence_needs_two_columns():
    A = generate(DictionarySpec(m=4, n=1, seed=0))
    with pytest.raises(DimensionMismatchError):
        coherence(A)


def test_correlation_level_raises_mean_coherence():
    seeds = [derive_seed(0, index) for index in range(200)]
    levels = [
        np.mean([mean_coherence(generate(DictionarySpec.for_level(64, 128, T, seed))) for seed in seeds])
        for T in (0, 4, 8)
    ]
    assert levels[0] <= levels[1] <= levels[2]
    assert levels[0] < levels[2]


def test_correlated_at_zero_level_is_gaussian():
    for seed in (0, 7, 2**63 + 5):
        gaussian = generate(DictionarySpec(m=12, n=30, seed=seed))
        correlated = generate(DictionarySpec(m=12, n=30, kind="correlated", T=0.0, seed=seed))
        np.testing.assert_array_equal(correlated.entries, gaussian.entries)

#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.middleware.exception import DimensionMismatchError, InvalidSpecError
from app.middleware.logger import setup_logger
from app.services.linalg import SensingMatrix
from app.services.random_streams import (
    DICTIONARY_NOISE,
    DICTIONARY_OFFSETS,
    DICTIONARY_REGENERATE,
    stream,
)

setup_logger()

MAX_REGENERATIONS = 16


class DictionaryKind(str, Enum):
    GAUSSIAN = "gaussian"
    CORRELATED = "correlated"


@dataclass(frozen=True)
class DictionarySpec:
    """
    Recipe for a random sensing matrix

    Gaussian: entries i.i.d. N(0, 1/m). Correlated: a_ij = n_ij + t_j with
    t_j ~ U[0, T] shared down column j. Columns are normalized afterwards.
    """

    m: int
    n: int
    kind: DictionaryKind = DictionaryKind.GAUSSIAN
    T: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", DictionaryKind(self.kind))
        if self.m < 1 or self.n < 1:
            raise InvalidSpecError(f"Dictionary dimensions must be positive, got m={self.m}, n={self.n}")
        if self.T < 0:
            raise InvalidSpecError(f"Correlation level T must be nonnegative, got {self.T}")
        if self.kind is DictionaryKind.GAUSSIAN and self.T != 0:
            raise InvalidSpecError("Gaussian dictionaries take no correlation level; use kind='correlated'")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpecError(f"Seed must be a 64-bit unsigned integer, got {self.seed}")

    @classmethod
    def for_level(cls, m: int, n: int, T: float, seed: int) -> "DictionarySpec":
        """Gaussian for T == 0, correlated otherwise"""
        kind = DictionaryKind.GAUSSIAN if T == 0 else DictionaryKind.CORRELATED
        return cls(m=m, n=n, kind=kind, T=float(T), seed=seed)


def generate(spec: DictionarySpec) -> SensingMatrix:
    """
    Draw a column-normalized sensing matrix

    n_ij come from substream (seed, 0) in column-major order, t_j from
    substream (seed, 1). A zero-norm column is redrawn from (seed, 2, attempt).

    Args:
        spec: Dictionary recipe

    Returns:
        SensingMatrix with unit-norm columns
    """
    scale = np.sqrt(1.0 / spec.m)
    noise = stream(spec.seed, DICTIONARY_NOISE).standard_normal((spec.n, spec.m)).T * scale
    offsets = np.zeros(spec.n)
    if spec.kind is DictionaryKind.CORRELATED:
        offsets = stream(spec.seed, DICTIONARY_OFFSETS).uniform(0.0, spec.T, size=spec.n)
    raw = noise + offsets[np.newaxis, :]

    norms = np.linalg.norm(raw, axis=0)
    for j in np.flatnonzero(norms == 0):
        logging.warning(f"[dictionary] Column {j} has zero norm, regenerating (seed={spec.seed})")
        for attempt in range(MAX_REGENERATIONS):
            column = stream(spec.seed, DICTIONARY_REGENERATE, int(j), attempt).standard_normal(spec.m) * scale
            column = column + offsets[j]
            if np.linalg.norm(column) > 0:
                raw[:, j] = column
                break
        else:
            raise InvalidSpecError(f"Could not draw a nonzero column {j} for seed {spec.seed}")
        norms[j] = np.linalg.norm(raw[:, j])

    return SensingMatrix(raw / norms)


def _abs_gram(A: SensingMatrix) -> np.ndarray:
    if A.n < 2:
        raise DimensionMismatchError("Coherence needs at least two columns")
    gram = np.abs(A.entries.T @ A.entries)
    np.fill_diagonal(gram, 0.0)
    return gram


def coherence(A: SensingMatrix) -> float:
    """max_{i != j} |<phi_i, phi_j>|"""
    return float(min(_abs_gram(A).max(), 1.0))


def mean_coherence(A: SensingMatrix) -> float:
    """Mean of |<phi_i, phi_j>| over distinct pairs"""
    gram = _abs_gram(A)
    return float(gram.sum() / (A.n * (A.n - 1)))

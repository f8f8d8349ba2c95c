#!/usr/bin/env python
# -*- coding: utf-8 -*-

import math
import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt

from app.middleware.exception import (
    DimensionMismatchError,
    InvalidParamsError,
    InvalidSparsityError,
    ZeroSignalError,
)
from app.middleware.logger import setup_logger
from app.services.linalg import IndexSet, SensingMatrix, index_set
from app.services.random_streams import NOISE_DIRECTION, SIGNAL_SUPPORT, SIGNAL_VALUES, stream

setup_logger()

Magnitude = Literal["gaussian", "equal"]


@dataclass(frozen=True)
class SparseSignal:
    """
    K-sparse vector over dimension n, stored as (support, values)

    Structural invariants (sorted distinct support inside [0, n), one value per
    index) always hold. Ground-truth signals additionally have no zero values;
    recovered estimates may carry zeros when a run stopped short of K indices.
    """

    n: int
    support: IndexSet
    values: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.intp)
        values = np.asarray(self.values, dtype=float)
        if support.shape != values.shape or support.ndim != 1:
            raise DimensionMismatchError(
                f"Support and values must be aligned 1-D arrays, got {support.shape} and {values.shape}"
            )
        order = np.argsort(support, kind="stable")
        support = index_set(support[order], self.n)
        values = values[order].copy()
        values.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    @property
    def K(self) -> int:
        return int(self.support.size)

    @classmethod
    def from_dense(cls, x: npt.ArrayLike) -> "SparseSignal":
        x = np.asarray(x, dtype=float)
        support = np.flatnonzero(x)
        return cls(n=x.size, support=support, values=x[support])

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.support] = self.values
        return x

    def scaled(self, c: float) -> "SparseSignal":
        return SparseSignal(n=self.n, support=self.support, values=self.values * c)

    def validate_ground_truth(self) -> "SparseSignal":
        """
        Raises:
            InvalidSparsityError: If the signal is empty or holds a zero value
        """
        if self.K < 1:
            raise InvalidSparsityError("A ground-truth signal needs at least one nonzero")
        if np.any(self.values == 0):
            raise InvalidSparsityError("Ground-truth values must all be nonzero")
        return self


@dataclass(frozen=True)
class NoisySample:
    """y = Phi x + e together with the snr actually achieved"""

    y: np.ndarray
    e: np.ndarray
    x: SparseSignal
    achieved_snr: float = field(default=math.inf)


def random_sparse_signal(n: int, K: int, seed: int, magnitude: Magnitude = "gaussian") -> SparseSignal:
    """
    Draw a K-sparse signal with uniformly random support

    Args:
        n: Ambient dimension
        K: Sparsity level, 1 <= K <= n
        seed: Stream seed; the support and the values use separate substreams
        magnitude: "gaussian" for i.i.d. N(0, 1) nonzeros, "equal" for random +-1

    Returns:
        SparseSignal with no zero values

    Raises:
        InvalidSparsityError: If K is outside 1..n
    """
    if not 1 <= K <= n:
        raise InvalidSparsityError(f"Sparsity must satisfy 1 <= K <= n, got K={K}, n={n}")

    support = stream(seed, SIGNAL_SUPPORT).choice(n, size=K, replace=False)
    rng = stream(seed, SIGNAL_VALUES)
    if magnitude == "equal":
        values = rng.choice([-1.0, 1.0], size=K)
    elif magnitude == "gaussian":
        values = rng.standard_normal(K)
        # rejection-resample exact zeros
        while np.any(values == 0):
            zeros = values == 0
            values[zeros] = rng.standard_normal(int(zeros.sum()))
    else:
        raise InvalidParamsError(f"Unknown magnitude model '{magnitude}'")

    return SparseSignal(n=n, support=support, values=values).validate_ground_truth()


def measure(A: SensingMatrix, x: SparseSignal) -> np.ndarray:
    """Phi x"""
    if x.n != A.n:
        raise DimensionMismatchError(f"Signal dimension {x.n} does not match matrix width {A.n}")
    return A.columns(x.support) @ x.values


def snr(A: SensingMatrix, x: SparseSignal, e: npt.ArrayLike) -> float:
    """||Phi x||^2 / ||e||^2, +inf for zero noise"""
    e = np.asarray(e, dtype=float)
    if e.shape != (A.m,):
        raise DimensionMismatchError(f"Noise must have length {A.m}, got shape {e.shape}")
    noise_energy = float(e @ e)
    if noise_energy == 0:
        return math.inf
    signal = measure(A, x)
    return float(signal @ signal) / noise_energy


def mar(x: SparseSignal) -> float:
    """Minimum-to-average ratio min|x_j| / (||x|| / sqrt(K))"""
    if x.K < 1:
        raise InvalidSparsityError("MAR needs at least one nonzero")
    magnitudes = np.abs(x.values)
    kappa = float(magnitudes.min() * math.sqrt(x.K) / np.linalg.norm(x.values))
    return min(kappa, 1.0)


def add_noise_at_snr(A: SensingMatrix, x: SparseSignal, target_snr: float, seed: int) -> NoisySample:
    """
    Build y = Phi x + e with ||Phi x||^2 / ||e||^2 equal to target_snr

    The noise direction is isotropic Gaussian from substream (seed, 12).

    Raises:
        InvalidParamsError: If target_snr is not positive
        ZeroSignalError: If Phi x = 0
    """
    if not target_snr > 0:
        raise InvalidParamsError(f"Target snr must be positive, got {target_snr}")
    signal = measure(A, x)
    signal_norm = float(np.linalg.norm(signal))
    if signal_norm == 0:
        raise ZeroSignalError("Cannot scale noise against a zero measurement vector")

    direction = stream(seed, NOISE_DIRECTION).standard_normal(A.m)
    e = direction * (signal_norm / (math.sqrt(target_snr) * np.linalg.norm(direction)))
    achieved = snr(A, x, e)
    logging.debug(f"[signals] Noise injected: target snr={target_snr:.6g}, achieved={achieved:.6g}")
    return NoisySample(y=signal + e, e=e, x=x, achieved_snr=achieved)

#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Dense linear-algebra kernel shared by every recovery algorithm.

Restricted least squares, projections onto span(Phi_S) and its orthogonal
complement, and projected column norms. Everything is computed from a thin
QR factorization of Phi_S; ``SupportFactorization`` keeps that factorization
current while a greedy run appends columns.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import numpy.typing as npt
import scipy.linalg

from app.config.config import settings
from app.middleware.exception import (
    DimensionMismatchError,
    InvalidParamsError,
    InvalidSpecError,
    RankDeficientError,
)

IndexSet = npt.NDArray[np.intp]

EMPTY_INDEX_SET: IndexSet = np.empty(0, dtype=np.intp)


def index_set(indices: Iterable[int], n: Optional[int] = None) -> IndexSet:
    """
    Build a validated index set (sorted, distinct, 0-based)

    Args:
        indices: Any iterable of integer indices
        n: Ambient dimension; when given, every index must lie in [0, n)

    Returns:
        Sorted read-only integer array

    Raises:
        InvalidParamsError: If indices repeat
        DimensionMismatchError: If an index falls outside [0, n)
    """
    arr = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.intp).ravel()
    arr = np.sort(arr)
    if arr.size > 1 and np.any(arr[1:] == arr[:-1]):
        raise InvalidParamsError(f"Index set contains duplicates: {arr.tolist()}")
    if n is not None and arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise DimensionMismatchError(f"Index set {arr.tolist()} is not contained in [0, {n})")
    arr.setflags(write=False)
    return arr


def rank_tolerance(m: int, column_norm: float = 1.0) -> float:
    """Pivot threshold below which a projected column counts as dependent"""
    return m * np.finfo(float).eps * max(column_norm, np.finfo(float).tiny)


@dataclass(frozen=True)
class SensingMatrix:
    """Dense m x n sensing matrix with unit l2-norm columns"""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float, order="F", copy=True)
        if entries.ndim != 2 or entries.shape[0] < 1 or entries.shape[1] < 1:
            raise DimensionMismatchError(f"Sensing matrix must be a non-empty 2-D array, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise InvalidSpecError("Sensing matrix contains NaN or Inf entries")
        norms = np.linalg.norm(entries, axis=0)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > settings.UNIT_NORM_TOL:
            raise InvalidSpecError(f"Sensing matrix columns must have unit norm (worst deviation {worst:.3e})")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_raw(cls, raw: npt.ArrayLike) -> "SensingMatrix":
        """Normalize every column of ``raw`` and wrap the result"""
        raw = np.asarray(raw, dtype=float)
        if raw.ndim != 2:
            raise DimensionMismatchError(f"Expected a 2-D array, got shape {raw.shape}")
        norms = np.linalg.norm(raw, axis=0)
        if np.any(norms == 0):
            raise InvalidSpecError(f"Columns {np.flatnonzero(norms == 0).tolist()} have zero norm")
        return cls(raw / norms)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def columns(self, indices: IndexSet) -> np.ndarray:
        return self.entries[:, np.asarray(indices, dtype=np.intp)]

    def correlations(self, v: np.ndarray) -> np.ndarray:
        """Phi^t v"""
        return self.entries.T @ self._check_vector(v)

    def _check_vector(self, v: npt.ArrayLike) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.m,):
            raise DimensionMismatchError(f"Expected a vector of length {self.m}, got shape {v.shape}")
        return v


class SupportFactorization:
    """
    Thin QR factorization of Phi_T maintained under column appends.

    Columns are kept in insertion order; ``support`` returns them sorted.
    Each append orthogonalizes the new block against the current basis twice
    (classical Gram-Schmidt with one reorthogonalization) and factors the
    remainder with a dense QR.
    """

    def __init__(self, A: SensingMatrix):
        self._A = A
        self._order: list = []
        self._q = np.empty((A.m, 0))
        self._r = np.empty((0, 0))

    @property
    def size(self) -> int:
        return len(self._order)

    @property
    def order(self) -> IndexSet:
        """Selected indices in the order they were appended"""
        return np.asarray(self._order, dtype=np.intp)

    @property
    def support(self) -> IndexSet:
        return index_set(self._order)

    @property
    def basis(self) -> np.ndarray:
        return self._q

    def extend(self, indices: Iterable[int]) -> None:
        """
        Append columns to the factorization

        Raises:
            RankDeficientError: If a new column is (numerically) in the current span
            InvalidParamsError: If an index is already present
        """
        new = [int(i) for i in indices]
        if not new:
            return
        if set(new) & set(self._order):
            raise InvalidParamsError(f"Indices {sorted(set(new) & set(self._order))} are already in the support")
        if self.size + len(new) > self._A.m:
            raise RankDeficientError(
                f"Support of size {self.size + len(new)} exceeds the {self._A.m} available measurements"
            )

        block = self._A.columns(new)
        coeff = self._q.T @ block
        remainder = block - self._q @ coeff
        correction = self._q.T @ remainder
        remainder -= self._q @ correction
        coeff += correction

        q_new, r_new = scipy.linalg.qr(remainder, mode="economic")
        tol = rank_tolerance(self._A.m, float(np.max(np.linalg.norm(block, axis=0))))
        pivots = np.abs(np.diag(r_new))
        if np.any(pivots <= tol):
            bad = [new[i] for i in np.flatnonzero(pivots <= tol)]
            raise RankDeficientError(f"Columns {bad} are linearly dependent on the current support")

        k = self.size
        r = np.zeros((k + len(new), k + len(new)))
        r[:k, :k] = self._r
        r[:k, k:] = coeff
        r[k:, k:] = r_new
        self._q = np.hstack([self._q, q_new])
        self._r = r
        self._order.extend(new)

    def solve(self, y: np.ndarray) -> np.ndarray:
        """Least-squares coefficients over the support, in insertion order"""
        if self.size == 0:
            return np.empty(0)
        return scipy.linalg.solve_triangular(self._r, self._q.T @ y, lower=False)

    def complement_apply(self, v: np.ndarray) -> np.ndarray:
        """P_perp v"""
        if self.size == 0:
            return np.array(v, dtype=float, copy=True)
        return v - self._q @ (self._q.T @ v)

    def projected_norms(self, candidates: IndexSet) -> np.ndarray:
        """||P_perp phi_i|| for each candidate"""
        candidates = np.asarray(candidates, dtype=np.intp)
        if self.size == 0:
            # unit-norm columns
            return np.ones(candidates.size)
        block = self._A.columns(candidates)
        block = block - self._q @ (self._q.T @ block)
        return np.linalg.norm(block, axis=0)


def _factor(A: SensingMatrix, S: Iterable[int]) -> SupportFactorization:
    S = index_set(S, A.n)
    factorization = SupportFactorization(A)
    factorization.extend(S)
    return factorization


def least_squares_on_support(A: SensingMatrix, y: npt.ArrayLike, S: Iterable[int]) -> np.ndarray:
    """
    Coefficients u_S minimizing ||y - Phi_S u_S||, aligned with sorted S

    Raises:
        RankDeficientError: If Phi_S is (numerically) rank deficient
        DimensionMismatchError: If y does not have length m
    """
    y = A._check_vector(y)
    factorization = _factor(A, S)
    coefficients = factorization.solve(y)
    # insertion order equals sorted order here
    return coefficients


def orthogonal_complement_apply(A: SensingMatrix, S: Iterable[int], v: npt.ArrayLike) -> np.ndarray:
    """P_perp_S v = v - Phi_S Phi_S^+ v"""
    v = A._check_vector(v)
    return _factor(A, S).complement_apply(v)


def projection_apply(A: SensingMatrix, S: Iterable[int], v: npt.ArrayLike) -> np.ndarray:
    """P_S v, the orthogonal projection onto span(Phi_S)"""
    v = A._check_vector(v)
    return v - _factor(A, S).complement_apply(v)


def projected_column_norms(A: SensingMatrix, S: Iterable[int], candidates: Iterable[int]) -> np.ndarray:
    """
    ||P_perp_S phi_i|| for every candidate i

    Raises:
        InvalidParamsError: If candidates intersect S
    """
    S = index_set(S, A.n)
    candidates = index_set(candidates, A.n)
    if np.intersect1d(S, candidates).size:
        raise InvalidParamsError("Candidates must be disjoint from the support")
    return _factor(A, S).projected_norms(candidates)

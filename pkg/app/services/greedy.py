#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Greedy sparse recovery: OMP, OLS, gOMP, mOLS and m2OLS.

All five share one iteration skeleton::

    (preselect) -> identify -> augment -> estimate -> update

gOMP takes its preselected set S^k directly as h^k, mOLS identifies over every
unselected index, and m2OLS identifies inside S^k. OMP is gOMP with N = 1 and
OLS is mOLS with L = 1; both run through exactly the same code.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from app.config.config import settings
from app.middleware.exception import (
    ConfigInvalidError,
    DegenerateCandidatesError,
    DimensionMismatchError,
    InvalidParamsError,
    NotEnoughCandidatesError,
)
from app.middleware.logger import setup_logger
from app.services.linalg import (
    EMPTY_INDEX_SET,
    IndexSet,
    SensingMatrix,
    SupportFactorization,
    index_set,
    rank_tolerance,
)
from app.services.signals import SparseSignal

setup_logger()


class Algorithm(str, Enum):
    OMP = "omp"
    OLS = "ols"
    GOMP = "gomp"
    MOLS = "mols"
    M2OLS = "m2ols"


@dataclass(frozen=True)
class GreedyConfig:
    """
    Algorithm selector and parameters

    N is the preselection width (gOMP, m2OLS), L the identification width
    (mOLS, m2OLS). epsilon is relative to ||y||; max_iterations defaults to K.
    """

    algorithm: Algorithm
    K: int
    N: Optional[int] = None
    L: Optional[int] = None
    epsilon: float = field(default_factory=lambda: settings.GREEDY_EPSILON)
    max_iterations: Optional[int] = None

    def __post_init__(self):
        try:
            algorithm = Algorithm(self.algorithm)
        except ValueError:
            raise ConfigInvalidError(f"Unknown algorithm '{self.algorithm}'")
        object.__setattr__(self, "algorithm", algorithm)

        if self.K < 1:
            raise ConfigInvalidError(f"Sparsity K must be at least 1, got {self.K}")
        if self.epsilon < 0:
            raise ConfigInvalidError(f"epsilon must be nonnegative, got {self.epsilon}")

        # OMP and OLS are fixed specializations
        if algorithm is Algorithm.OMP:
            self._require_unset("N", 1)
            self._require_unset("L", None)
            object.__setattr__(self, "N", 1)
        elif algorithm is Algorithm.OLS:
            self._require_unset("N", None)
            self._require_unset("L", 1)
            object.__setattr__(self, "L", 1)
        elif algorithm is Algorithm.GOMP:
            if self.N is None or self.N < 1:
                raise ConfigInvalidError(f"gOMP needs N >= 1, got N={self.N}")
            self._require_unset("L", None)
        elif algorithm is Algorithm.MOLS:
            if self.L is None or not 1 <= self.L <= self.K:
                raise ConfigInvalidError(f"mOLS needs 1 <= L <= K, got L={self.L}, K={self.K}")
            self._require_unset("N", None)
        elif algorithm is Algorithm.M2OLS:
            if self.N is None or self.L is None or not (1 <= self.L <= self.N and self.L <= self.K):
                raise ConfigInvalidError(
                    f"m2OLS needs 1 <= L <= N and L <= K, got N={self.N}, L={self.L}, K={self.K}"
                )

        if self.max_iterations is None:
            object.__setattr__(self, "max_iterations", self.K)
        elif self.max_iterations < 1:
            raise ConfigInvalidError(f"max_iterations must be positive, got {self.max_iterations}")

    def _require_unset(self, name: str, allowed: Optional[int]) -> None:
        value = getattr(self, name)
        if value is not None and value != allowed:
            raise ConfigInvalidError(f"{self.algorithm.value} does not take {name}={value}")

    @property
    def preselects(self) -> bool:
        return self.algorithm in (Algorithm.OMP, Algorithm.GOMP, Algorithm.M2OLS)

    @property
    def identifies(self) -> bool:
        return self.algorithm in (Algorithm.OLS, Algorithm.MOLS, Algorithm.M2OLS)

    @property
    def per_iteration(self) -> int:
        """Indices added per iteration"""
        return self.L if self.identifies else self.N

    def params(self) -> Dict[str, Any]:
        return {
            "K": self.K,
            "N": self.N,
            "L": self.L,
            "epsilon": self.epsilon,
            "max_iterations": self.max_iterations,
        }

    def validate_against(self, A: SensingMatrix) -> None:
        """
        Raises:
            ConfigInvalidError: If the run cannot fit the matrix
        """
        if self.K > A.n:
            raise ConfigInvalidError(f"K={self.K} exceeds the ambient dimension n={A.n}")
        if self.per_iteration * self.max_iterations > A.m:
            raise ConfigInvalidError(
                f"{self.per_iteration} indices x {self.max_iterations} iterations exceeds m={A.m} measurements"
            )


@dataclass(frozen=True)
class IterationTrace:
    k: int
    preselected: IndexSet
    identified: IndexSet
    support: IndexSet
    residual_norm: float
    # max |<phi_j, r>| over the support, relative to ||y||
    residual_leak: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "preselected": self.preselected.tolist(),
            "identified": self.identified.tolist(),
            "support": self.support.tolist(),
            "residual_norm": self.residual_norm,
            "residual_leak": self.residual_leak,
        }


@dataclass
class RecoveryResult:
    config: GreedyConfig
    x_hat: SparseSignal
    support_hat: IndexSet
    iterations: List[IterationTrace]
    converged: bool
    exact_support_match: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "algorithm": self.config.algorithm.value,
            "params": self.config.params(),
            "iterations": [trace.to_dict() for trace in self.iterations],
            "support_hat": self.support_hat.tolist(),
            "x_hat": {str(int(i)): float(v) for i, v in zip(self.x_hat.support, self.x_hat.values)},
            "converged": self.converged,
        }
        if self.exact_support_match is not None:
            payload["exact_support_match"] = self.exact_support_match
        return payload


def _top_indices(scores: np.ndarray, count: int) -> np.ndarray:
    """Positions of the ``count`` largest scores, ties to the smaller position"""
    order = np.argsort(-scores, kind="stable")
    return order[:count]


def _complement(n: int, forbidden: IndexSet) -> IndexSet:
    mask = np.ones(n, dtype=bool)
    mask[forbidden] = False
    return index_set(np.flatnonzero(mask))


def preselect(A: SensingMatrix, r: npt.ArrayLike, forbidden: IndexSet, N: int) -> IndexSet:
    """
    The N indices outside ``forbidden`` with the largest |<phi_i, r>|

    Raises:
        NotEnoughCandidatesError: If fewer than N indices are allowed
    """
    forbidden = index_set(forbidden, A.n)
    allowed = _complement(A.n, forbidden)
    if N < 1:
        raise InvalidParamsError(f"N must be at least 1, got {N}")
    if N > allowed.size:
        raise NotEnoughCandidatesError(f"Requested {N} indices but only {allowed.size} are selectable")
    correlations = np.abs(A.correlations(r)[allowed])
    return index_set(allowed[_top_indices(correlations, N)])


def identification_scores(
    A: SensingMatrix, r: np.ndarray, candidates: IndexSet, factorization: SupportFactorization
) -> np.ndarray:
    """|<phi_i, r>|^2 / ||P_perp phi_i||^2, -inf where the projected norm vanishes"""
    correlations = A.columns(candidates).T @ r
    norms = factorization.projected_norms(candidates)
    scores = np.full(candidates.size, -np.inf)
    finite = norms > rank_tolerance(A.m)
    scores[finite] = correlations[finite] ** 2 / norms[finite] ** 2
    return scores


def _identify(
    A: SensingMatrix,
    r: np.ndarray,
    candidates: IndexSet,
    L: int,
    factorization: SupportFactorization,
    shrink: bool,
) -> IndexSet:
    scores = identification_scores(A, r, candidates, factorization)
    finite = int(np.isfinite(scores).sum())
    if finite < L:
        if not shrink:
            raise DegenerateCandidatesError(
                f"Only {finite} of {candidates.size} candidates have a nonzero projected norm, need {L}"
            )
        L = finite
    return index_set(candidates[_top_indices(scores, L)])


def identify(
    A: SensingMatrix,
    y: npt.ArrayLike,
    r: npt.ArrayLike,
    support: IndexSet,
    candidates: IndexSet,
    L: int,
) -> IndexSet:
    """
    The L candidates maximizing |<phi_i, r>|^2 / ||P_perp_support phi_i||^2

    For r = P_perp_support y this set minimizes the sum over i of
    ||P_perp_{support + i} y||^2 among all L-subsets of candidates.

    Raises:
        DegenerateCandidatesError: If fewer than L candidates have a nonzero projected norm
    """
    support = index_set(support, A.n)
    candidates = index_set(candidates, A.n)
    A._check_vector(y)
    r = A._check_vector(r)
    if np.intersect1d(support, candidates).size:
        raise InvalidParamsError("Candidates must be disjoint from the support")
    if not 1 <= L <= candidates.size:
        raise InvalidParamsError(f"L must satisfy 1 <= L <= |candidates| = {candidates.size}, got {L}")
    factorization = SupportFactorization(A)
    factorization.extend(support)
    return _identify(A, r, candidates, L, factorization, shrink=False)


def top_k_truncate(x: npt.ArrayLike, K: int) -> Tuple[IndexSet, np.ndarray]:
    """
    Keep the K largest-magnitude entries of a dense vector

    Returns:
        (sorted support, values aligned with it)
    """
    x = np.asarray(x, dtype=float)
    if K < 1:
        raise InvalidParamsError(f"K must be at least 1, got {K}")
    if K > x.size:
        raise DimensionMismatchError(f"Cannot keep {K} entries of a length-{x.size} vector")
    support = index_set(_top_indices(np.abs(x), K))
    return support, x[support]


def run(
    A: SensingMatrix,
    y: npt.ArrayLike,
    config: GreedyConfig,
    true_support: Optional[IndexSet] = None,
) -> RecoveryResult:
    """
    Recover a K-sparse vector from y = Phi x (+ e)

    Args:
        A: Sensing matrix
        y: Measurement vector of length m
        config: Algorithm and parameters
        true_support: When given, ``exact_support_match`` is filled in

    Returns:
        RecoveryResult with the per-iteration trace

    Raises:
        ConfigInvalidError: If config does not fit A
        RankDeficientError: If Phi_{T^k} loses full column rank
    """
    y = A._check_vector(y)
    config.validate_against(A)

    y_norm = float(np.linalg.norm(y))
    threshold = config.epsilon * y_norm
    factorization = SupportFactorization(A)
    r = y.copy()
    r_norm = y_norm
    traces: List[IterationTrace] = []
    coefficients = np.empty(0)

    converged = y_norm == 0 or r_norm < threshold
    k = 0
    while not converged and k < config.max_iterations:
        k += 1
        support = factorization.support
        remaining = A.n - support.size
        if remaining == 0:
            break

        preselected = EMPTY_INDEX_SET
        if config.preselects:
            preselected = preselect(A, r, support, min(config.N, remaining))

        if config.identifies:
            candidates = preselected if config.preselects else _complement(A.n, support)
            identified = _identify(A, r, candidates, min(config.L, candidates.size), factorization, shrink=True)
        else:
            identified = preselected

        if identified.size == 0:
            logging.warning(f"[greedy] No admissible index at iteration {k}, stopping early")
            break

        factorization.extend(identified)
        coefficients = factorization.solve(y)
        r = y - A.columns(factorization.order) @ coefficients
        r_norm = float(np.linalg.norm(r))
        leak = float(np.max(np.abs(A.columns(factorization.order).T @ r))) / y_norm
        if leak > settings.ORTHOGONALITY_TOL:
            logging.warning(
                f"[greedy] Residual not orthogonal to the support at iteration {k}: leak {leak:.3e} "
                f"exceeds {settings.ORTHOGONALITY_TOL:.1e}"
            )

        trace = IterationTrace(
            k=k,
            preselected=preselected,
            identified=identified,
            support=factorization.support,
            residual_norm=r_norm,
            residual_leak=leak,
        )
        traces.append(trace)
        logging.debug(
            f"[greedy] {config.algorithm.value} k={k} h={identified.tolist()} |T|={trace.support.size} "
            f"||r||={r_norm:.3e}"
        )
        converged = r_norm < threshold

    x_full = np.zeros(A.n)
    if factorization.size:
        x_full[factorization.order] = coefficients
    support_hat, values = top_k_truncate(x_full, config.K)
    x_hat = SparseSignal(n=A.n, support=support_hat, values=values)

    match = None
    if true_support is not None:
        match = bool(np.array_equal(support_hat, index_set(true_support, A.n)))

    return RecoveryResult(
        config=config,
        x_hat=x_hat,
        support_hat=support_hat,
        iterations=traces,
        converged=bool(converged),
        exact_support_match=match,
    )


def first_iteration_energy(
    A: SensingMatrix, y: npt.ArrayLike, true_support: IndexSet, result: RecoveryResult
) -> Dict[str, float]:
    """
    Slack of the first-iteration energy observations for a completed run

    obs1 (N <= K): ||Phi_S1^t y|| / sqrt(N) - ||Phi_T^t y|| / sqrt(K)
    obs2 (N > K):  ||Phi_S1^t y|| - ||Phi_T^t y||
    obs3:          ||Phi_T1^t y|| / sqrt(L) - ||Phi_T^t y|| / sqrt(K)

    Nonnegative slack means the inequality holds. Only the applicable one of
    obs1/obs2 is reported.
    """
    config = result.config
    if not result.iterations:
        raise InvalidParamsError("The run recorded no iterations")
    first = result.iterations[0]
    correlations = A.correlations(np.asarray(y, dtype=float))
    true_support = index_set(true_support, A.n)
    K = true_support.size
    truth = np.linalg.norm(correlations[true_support])
    identified = np.linalg.norm(correlations[first.identified])

    slack = {"obs3": identified / np.sqrt(first.identified.size) - truth / np.sqrt(K)}
    if first.preselected.size:
        preselected = np.linalg.norm(correlations[first.preselected])
        N = first.preselected.size
        if N <= K:
            slack["obs1"] = preselected / np.sqrt(N) - truth / np.sqrt(K)
        else:
            slack["obs2"] = preselected - truth
    logging.debug(f"[greedy] First-iteration energy slack for {config.algorithm.value}: {slack}")
    return {name: float(value) for name, value in slack.items()}

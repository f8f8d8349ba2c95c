#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Monte-Carlo recovery benchmarks.

A sweep walks a grid of (correlation level T, m, K) points. Every trial of a
grid point draws one fresh dictionary and one fresh signal from seeds derived
from (master_seed, grid index, trial index), and every configured algorithm is
run on that same instance. Trials run on a thread pool; results are reduced in
trial order, so counts do not depend on the number of workers.
"""

import json
import time
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config.config import settings
from app.middleware.exception import (
    InvalidParamsError,
    NotModeledError,
    SparseRecoveryError,
    exception_message,
)
from app.middleware.logger import setup_logger
from app.services import file_service
from app.services.dictionary import DictionarySpec, generate
from app.services.greedy import Algorithm, GreedyConfig, run
from app.services.random_streams import TRIAL_SEEDS, derive_seed
from app.services.signals import add_noise_at_snr, measure, random_sparse_signal

setup_logger()

CSV_COLUMNS = [
    "algorithm", "m", "n", "K", "N", "L", "T", "trials", "successes",
    "recovery_probability", "mean_iterations", "mean_runtime_us_per_iter",
]


class AlgorithmSpec(BaseModel):
    """One algorithm entry of a sweep; K comes from the grid point"""

    model_config = ConfigDict(extra="forbid")

    algorithm: Algorithm
    N: Optional[int] = None
    L: Optional[int] = None

    def to_config(self, K: int, epsilon: float) -> GreedyConfig:
        return GreedyConfig(algorithm=self.algorithm, K=K, N=self.N, L=self.L, epsilon=epsilon)


class ExperimentSpec(BaseModel):
    """
    One Monte-Carlo sweep

    sweep="measurements" varies m over ``m_values`` at fixed ``K``;
    sweep="sparsity" varies K over ``k_values`` at fixed ``m``.
    """

    model_config = ConfigDict(extra="forbid")

    name: str = "sweep"
    n: int = Field(256, ge=1)
    sweep: Literal["measurements", "sparsity"] = "measurements"
    m_values: List[int] = Field(default_factory=lambda: list(range(40, 131, 10)))
    k_values: List[int] = Field(default_factory=lambda: [10, 20, 30])
    K: int = Field(10, ge=1)
    m: int = Field(128, ge=1)
    trials: int = Field(default_factory=lambda: settings.BENCH_TRIALS, ge=1)
    dictionary_T: List[float] = Field(default_factory=lambda: [0.0])
    algorithms: List[AlgorithmSpec]
    master_seed: int = Field(0, ge=0, lt=2**64)
    epsilon: float = Field(default_factory=lambda: settings.GREEDY_EPSILON, ge=0)
    target_snr: Optional[float] = Field(None, gt=0)
    magnitude: Literal["gaussian", "equal"] = "gaussian"
    warmup_trials: int = Field(default_factory=lambda: settings.BENCH_WARMUP_TRIALS, ge=0)
    measure_runtime: bool = True

    @field_validator("dictionary_T", mode="before")
    @classmethod
    def _scalar_level(cls, value):
        return [value] if isinstance(value, (int, float)) else value

    @field_validator("dictionary_T")
    @classmethod
    def _nonnegative_levels(cls, value):
        if not value or any(t < 0 for t in value):
            raise ValueError("dictionary_T must list nonnegative correlation levels")
        return value

    @model_validator(mode="after")
    def _check_grid(self):
        if any(m < 1 for m in self.m_values) or not self.m_values:
            raise ValueError("m_values must be a non-empty list of positive integers")
        if any(k < 1 for k in self.k_values) or not self.k_values:
            raise ValueError("k_values must be a non-empty list of positive integers")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        for K in self.k_values if self.sweep == "sparsity" else [self.K]:
            for entry in self.algorithms:
                entry.to_config(K, self.epsilon)
        return self

    def grid(self) -> List[Tuple[float, int, int]]:
        """(T, m, K) points in sweep order"""
        points = []
        for T in self.dictionary_T:
            if self.sweep == "measurements":
                points.extend((T, m, self.K) for m in self.m_values)
            else:
                points.extend((T, self.m, K) for K in self.k_values)
        return points


@dataclass
class TrialOutcome:
    success: bool = False
    iterations: int = 0
    runtime: float = 0.0
    failure: Optional[str] = None


@dataclass
class ExperimentRecord:
    algorithm: str
    m: int
    n: int
    K: int
    N: Optional[int]
    L: Optional[int]
    T: float
    trials: int
    successes: int
    mean_iterations: float
    mean_iterations_success: Optional[float]
    mean_runtime_per_iteration: Optional[float]
    failures_by_cause: Dict[str, int] = field(default_factory=dict)

    @property
    def recovery_probability(self) -> float:
        return self.successes / self.trials

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "m": self.m,
            "n": self.n,
            "K": self.K,
            "N": self.N,
            "L": self.L,
            "T": self.T,
            "trials": self.trials,
            "successes": self.successes,
            "recovery_probability": self.recovery_probability,
            "mean_iterations": self.mean_iterations,
            "mean_iterations_success": self.mean_iterations_success,
            "mean_runtime_us_per_iter": (
                None if self.mean_runtime_per_iteration is None else self.mean_runtime_per_iteration * 1e6
            ),
            "failures_by_cause": dict(self.failures_by_cause),
        }


def _run_trial(
    spec: ExperimentSpec, configs: Sequence[GreedyConfig], grid_index: int, trial: int, T: float, m: int, K: int
) -> List[TrialOutcome]:
    trial_seed = derive_seed(spec.master_seed, TRIAL_SEEDS, grid_index, trial)
    outcomes = [TrialOutcome() for _ in configs]
    try:
        A = generate(DictionarySpec.for_level(m=m, n=spec.n, T=T, seed=trial_seed))
        x = random_sparse_signal(spec.n, K, trial_seed, magnitude=spec.magnitude)
        y = measure(A, x) if spec.target_snr is None else add_noise_at_snr(A, x, spec.target_snr, trial_seed).y
    except SparseRecoveryError as e:
        for outcome in outcomes:
            outcome.failure = type(e).__name__
        return outcomes

    for config, outcome in zip(configs, outcomes):
        started = time.perf_counter()
        try:
            result = run(A, y, config, true_support=x.support)
        except SparseRecoveryError as e:
            logging.warning(f"[bench] Trial {trial} of grid point {grid_index} failed: {exception_message(e)}")
            outcome.failure = type(e).__name__
            continue
        outcome.runtime = time.perf_counter() - started
        outcome.iterations = len(result.iterations)
        outcome.success = bool(result.exact_support_match)
    return outcomes


def _aggregate(
    spec: ExperimentSpec, config: GreedyConfig, T: float, m: int, outcomes: List[TrialOutcome]
) -> ExperimentRecord:
    completed = [o for o in outcomes if o.failure is None]
    successes = [o for o in completed if o.success]
    timed = [o for i, o in enumerate(outcomes) if o.failure is None and o.iterations and i >= spec.warmup_trials]
    if not timed:
        timed = [o for o in completed if o.iterations]

    runtime = None
    if spec.measure_runtime and timed:
        runtime = float(np.mean([o.runtime / o.iterations for o in timed]))

    return ExperimentRecord(
        algorithm=config.algorithm.value,
        m=m,
        n=spec.n,
        K=config.K,
        N=config.N,
        L=config.L,
        T=T,
        trials=len(outcomes),
        successes=len(successes),
        mean_iterations=float(np.mean([o.iterations for o in completed])) if completed else 0.0,
        mean_iterations_success=float(np.mean([o.iterations for o in successes])) if successes else None,
        mean_runtime_per_iteration=runtime,
        failures_by_cause=dict(Counter(o.failure for o in outcomes if o.failure is not None)),
    )


def run_experiment(spec: ExperimentSpec, workers: Optional[int] = None) -> List[ExperimentRecord]:
    """
    Execute a sweep

    Args:
        spec: Sweep definition
        workers: Thread count; defaults to BENCH_WORKERS

    Returns:
        One record per (grid point, algorithm), grid order then algorithm order
    """
    workers = workers or settings.BENCH_WORKERS
    records: List[ExperimentRecord] = []
    grid = spec.grid()
    logging.info(f"[bench] Sweep '{spec.name}': {len(grid)} grid points x {spec.trials} trials, {workers} worker(s)")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for grid_index, (T, m, K) in enumerate(grid):
            configs = [entry.to_config(K, spec.epsilon) for entry in spec.algorithms]
            per_trial = list(pool.map(
                lambda trial: _run_trial(spec, configs, grid_index, trial, T, m, K),
                range(spec.trials),
            ))
            for column, config in enumerate(configs):
                record = _aggregate(spec, config, T, m, [outcomes[column] for outcomes in per_trial])
                records.append(record)
                logging.info(
                    f"[bench] T={T:g} m={m} K={K} {config.algorithm.value}: "
                    f"p={record.recovery_probability:.3f}, iterations={record.mean_iterations:.2f}"
                )
    return records


def flop_estimate(
    algorithm: Union[Algorithm, str], K: int, m: int, n: int, N: int = 1, s: Optional[int] = None
) -> int:
    """
    Closed-form flop counts

    OMP: 2Kmn + 3K^2 m. gOMP: 2smn + (2N^2 + N) s^2 m with s iterations
    (defaults to K). No closed form is known for OLS, mOLS or m2OLS.

    Raises:
        NotModeledError: For the least-squares family
    """
    algorithm = Algorithm(algorithm)
    if min(K, m, n, N) < 1 or (s is not None and s < 1):
        raise InvalidParamsError("Flop estimates need positive parameters")
    if algorithm is Algorithm.OMP:
        return 2 * K * m * n + 3 * K ** 2 * m
    if algorithm is Algorithm.GOMP:
        s = K if s is None else s
        return 2 * s * m * n + (2 * N ** 2 + N) * s ** 2 * m
    raise NotModeledError(f"No closed-form flop count for {algorithm.value}")


def records_frame(records: Sequence[ExperimentRecord]) -> pd.DataFrame:
    """Plot-ready table with the CSV column layout"""
    rows = []
    for record in records:
        runtime = record.mean_runtime_per_iteration
        rows.append({
            "algorithm": record.algorithm,
            "m": record.m,
            "n": record.n,
            "K": record.K,
            "N": "" if record.N is None else record.N,
            "L": "" if record.L is None else record.L,
            "T": f"{record.T:g}",
            "trials": record.trials,
            "successes": record.successes,
            "recovery_probability": f"{record.recovery_probability:.6f}",
            "mean_iterations": f"{record.mean_iterations:.6f}",
            "mean_runtime_us_per_iter": "" if runtime is None else f"{runtime * 1e6:.3f}",
        })
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def emit(records: Sequence[ExperimentRecord], path: str, format: Literal["csv", "json"] = "csv") -> str:
    """
    Write records as CSV (fixed header, 6-digit probabilities) or JSON

    Raises:
        IOError: If writing fails
    """
    if format == "csv":
        content = records_frame(records).to_csv(index=False, lineterminator="\n")
    elif format == "json":
        content = json.dumps([record.to_dict() for record in records], indent=2)
    else:
        raise InvalidParamsError(f"Unknown output format '{format}'")
    return file_service.write_text(path, content)


def load_spec(path: str) -> ExperimentSpec:
    """Read and validate a JSON sweep description"""
    return ExperimentSpec.model_validate(file_service.load_json(path))

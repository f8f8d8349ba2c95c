# test_guarantees.py - end-to-end checks of the recovery guarantees
import os

import pytest

from app.services.analysis import CHECK_TOL, check_lemma_bounds, check_theorem1, check_theorem2
from app.services.bench import ExperimentSpec, load_spec, run_experiment
from app.services.dictionary import DictionarySpec, generate
from app.services.random_streams import derive_seed


def test_noiseless_guarantee_holds_on_certified_instances():
    report = check_theorem1(seed=0, target=25)
    assert report.certified == 25
    assert report.counterexamples == []
    assert report.recovered == 25
    for tally in (report.energy, report.first_iteration, report.alpha_bound, report.beta_bound):
        assert tally.violations == 0
    assert report.regime == "overdetermined"
    assert len(report.certified_m) == 25


def test_noisy_guarantee_holds_above_threshold():
    report = check_theorem2(seed=1, target=25)
    assert report.counterexamples == []
    assert report.recovered == report.certified
    assert report.certified + report.skipped_no_guarantee >= 25


def test_underdetermined_draws_are_not_certified():
    report = check_theorem1(seed=2, target=1, m_range=(6, 11), max_attempts=20)
    assert report.attempts == 20
    assert report.certified == 0
    assert report.regime is None
    assert report.to_dict()["m_range"] == [6, 11]


def test_theorem_reports_are_reproducible():
    first = check_theorem1(seed=3, target=2).to_dict()
    second = check_theorem1(seed=3, target=2).to_dict()
    assert first == second


def test_lemmas_on_underdetermined_dictionaries():
    worst = float("inf")
    for index in range(50):
        A = generate(DictionarySpec(m=6, n=10, seed=derive_seed(9, index)))
        report = check_lemma_bounds(A, trials=100, seed=index)
        assert report.violations == 0, index
        assert sorted(report.deltas) == [1, 2, 3, 4]
        tallies = (report.monotonicity, report.cross_correlation, report.sandwich_measurement, report.sandwich_coefficient)
        worst = min(worst, *(tally.worst_slack for tally in tallies))
    assert worst >= -CHECK_TOL


# ---------------------------------------------------------------------------
# Desk-scale trends
# ---------------------------------------------------------------------------

def _probabilities(records, algorithm, T):
    cells = sorted((r.m, r.recovery_probability) for r in records if r.algorithm == algorithm and r.T == T)
    return [p for _, p in cells]


@pytest.fixture(scope="module")
def measurement_records():
    sweeps = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), "app", "config", "sweeps")
    spec = load_spec(os.path.join(sweeps, "measurements.json"))
    spec = ExperimentSpec.model_validate({**spec.model_dump(), "dictionary_T": [0, 8], "measure_runtime": False})
    return spec, run_experiment(spec)


@pytest.mark.slow
def test_shipped_sweep_follows_protocol(measurement_records):
    spec, _ = measurement_records
    assert (spec.n, spec.K, spec.trials) == (256, 10, 200)
    m2ols = [a for a in spec.algorithms if a.algorithm == "m2ols"]
    assert [(a.N, a.L) for a in m2ols] == [(48, 3)]


@pytest.mark.slow
def test_recovery_is_nondecreasing_in_measurements(measurement_records):
    spec, records = measurement_records
    for algorithm in {a.algorithm for a in spec.algorithms}:
        probabilities = _probabilities(records, algorithm, 0.0)
        assert len(probabilities) == len(spec.m_values)
        for low, high in zip(probabilities, probabilities[1:]):
            assert high >= low - 0.05, (algorithm, probabilities)


@pytest.mark.slow
def test_preselection_beats_generalized_omp_on_correlated_dictionaries(measurement_records):
    _, records = measurement_records
    band = range(60, 111, 10)
    m2ols = {r.m: r.recovery_probability for r in records if r.algorithm == "m2ols" and r.T == 8.0}
    gomp = {r.m: r.recovery_probability for r in records if r.algorithm == "gomp" and r.T == 8.0}
    margins = [m2ols[m] - gomp[m] for m in band]
    assert sum(margin >= 0 for margin in margins) >= 0.8 * len(margins)


@pytest.mark.slow
def test_preselection_is_cheaper_per_iteration_than_ols():
    spec = ExperimentSpec.model_validate({
        "name": "runtime",
        "n": 256,
        "sweep": "sparsity",
        "m": 128,
        "k_values": [10, 20, 30],
        "trials": 200,
        "algorithms": [{"algorithm": "ols"}, {"algorithm": "m2ols", "N": 48, "L": 3}],
        "measure_runtime": True,
    })
    records = run_experiment(spec, workers=1)
    for K in (10, 20, 30):
        cell = {r.algorithm: r.mean_runtime_per_iteration for r in records if r.K == K}
        assert cell["m2ols"] < cell["ols"], (K, cell)

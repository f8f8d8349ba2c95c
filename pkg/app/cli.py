#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Command-line entry point: python -m app.cli <command> [options]

Every command prints one JSON document on standard output, echoing the
resolved options (seeds included). Logs and summaries go to standard error.
Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

import os
import sys
import json
import argparse
import logging
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.config.config import settings
from app.middleware.exception import SparseRecoveryError, exception_message
from app.middleware.logger import setup_logger
from app.services import analysis, bench, file_service
from app.services.dictionary import DictionarySpec, coherence, generate, mean_coherence
from app.services.greedy import Algorithm, GreedyConfig, first_iteration_energy, run
from app.services.signals import add_noise_at_snr, mar, measure, random_sparse_signal

setup_logger()

ALGORITHMS = [a.value for a in Algorithm]


def _echo(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: value for key, value in sorted(vars(args).items()) if key != "func"}


def _print(payload: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _config(args: argparse.Namespace, K: int) -> GreedyConfig:
    return GreedyConfig(algorithm=args.alg, K=K, N=args.big_n, L=args.l, epsilon=args.eps)


def cmd_gen_matrix(args: argparse.Namespace) -> Dict[str, Any]:
    spec = DictionarySpec.for_level(m=args.m, n=args.n, T=args.corr_T, seed=args.seed)
    A = generate(spec)
    file_service.save_matrix(A, args.out)
    payload = {"out": args.out, "kind": spec.kind.value}
    if A.n > 1:
        payload["coherence"] = coherence(A)
        payload["mean_coherence"] = mean_coherence(A)
    return payload


def cmd_gen_signal(args: argparse.Namespace) -> Dict[str, Any]:
    x = random_sparse_signal(args.n, args.k, args.seed, magnitude=args.magnitude)
    file_service.save_signal(x, args.out)
    return {"out": args.out, "support": x.support.tolist(), "mar": mar(x)}


def _load_problem(args: argparse.Namespace):
    A = file_service.load_matrix(args.matrix, normalize=args.normalize)
    x = None
    if args.signal:
        x = file_service.load_signal(args.signal).validate_ground_truth()
        if args.snr is not None:
            y = add_noise_at_snr(A, x, args.snr, args.noise_seed).y
        else:
            y = measure(A, x)
    else:
        y = file_service.load_vector(args.y, length=A.m)
    K = args.k if args.k is not None else (x.K if x is not None else None)
    if K is None:
        raise argparse.ArgumentTypeError("--k is required when recovering from --y")
    return A, x, y, K


def cmd_recover(args: argparse.Namespace) -> Dict[str, Any]:
    A, x, y, K = _load_problem(args)
    result = run(A, y, _config(args, K), true_support=None if x is None else x.support)
    payload = result.to_dict()
    if args.json:
        file_service.save_json(payload, args.json)
    logging.info(
        f"[cli] {result.config.algorithm.value}: {len(result.iterations)} iterations, converged={result.converged}"
    )
    return {"result": payload}


def cmd_analyze(args: argparse.Namespace) -> Dict[str, Any]:
    if not args.signal:
        raise argparse.ArgumentTypeError("analyze needs the ground truth (--signal)")
    A, x, y, K = _load_problem(args)
    result = run(A, y, _config(args, K), true_support=x.support)
    return {
        "result": result.to_dict(),
        "diagnostics": [diag.to_dict() for diag in analysis.run_diagnostics(A, x, y, result)],
        "energy": first_iteration_energy(A, y, x.support, result) if result.iterations else {},
    }


def cmd_sweep(args: argparse.Namespace) -> Dict[str, Any]:
    spec = bench.load_spec(args.spec)
    records = bench.run_experiment(spec, workers=args.workers)
    out = args.out or os.path.join(settings.RESULTS_DIR, f"{spec.name}.csv")
    bench.emit(records, out, "csv")
    bench.emit(records, os.path.splitext(out)[0] + ".json", "json")
    for record in records:
        sys.stderr.write(
            f"{record.algorithm:>6} T={record.T:g} m={record.m} K={record.K}: p={record.recovery_probability:.3f}\n"
        )
    return {"resolved_spec": spec.model_dump(mode="json"), "out": out, "records": len(records)}


def cmd_ric(args: argparse.Namespace) -> Dict[str, Any]:
    A = file_service.load_matrix(args.matrix, normalize=args.normalize)
    if args.samples is None:
        estimate = analysis.exact_ric(A, args.order, budget=args.budget)
    else:
        estimate = analysis.sampled_ric_lower_bound(A, args.order, args.samples, args.seed)
    return estimate.to_dict()


def cmd_check(args: argparse.Namespace) -> Dict[str, Any]:
    if args.lemmas:
        if args.matrix:
            A = file_service.load_matrix(args.matrix, normalize=args.normalize)
        else:
            A = generate(DictionarySpec(m=args.m, n=args.n, seed=args.seed))
        report = analysis.check_lemma_bounds(A, args.trials, args.seed)
        return {"lemmas": report.to_dict()}
    if args.theorem1:
        report = analysis.check_theorem1(args.seed, target=args.trials)
    else:
        report = analysis.check_theorem2(args.seed, target=args.trials, snr_factor=args.snr_factor)
    return {report.theorem: report.to_dict()}


def cmd_flops(args: argparse.Namespace) -> Dict[str, Any]:
    return {"flops": bench.flop_estimate(args.alg, args.k, args.m, args.n, N=args.big_n, s=args.s)}


def _add_problem_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--matrix", required=True, help="Matrix CSV ('m,n' header)")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--signal", help="Signal CSV ('n,K' header); y = Phi x")
    source.add_argument("--y", help="Measurement vector file (length header, one value per line)")
    parser.add_argument("--snr", type=float, default=None, help="Add noise at this snr (with --signal)")
    parser.add_argument("--noise-seed", type=int, default=0, help="Seed for --snr noise")
    parser.add_argument("--alg", choices=ALGORITHMS, default=Algorithm.M2OLS.value, help="Algorithm")
    parser.add_argument("--k", type=int, default=None, help="Sparsity; defaults to the signal's")
    parser.add_argument("--big-n", type=int, default=None, help="Preselection width N (gomp, m2ols)")
    parser.add_argument("--l", type=int, default=None, help="Identification width L (mols, m2ols)")
    parser.add_argument("--eps", type=float, default=settings.GREEDY_EPSILON, help="Relative residual threshold")
    parser.add_argument("--normalize", action="store_true", help="Normalize columns on load")


def build_parser() -> argparse.ArgumentParser:
    formatter = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="app.cli", description="Greedy sparse recovery toolkit", formatter_class=formatter)
    sub = p.add_subparsers(dest="cmd", required=True)

    pm = sub.add_parser("gen-matrix", help="Draw a column-normalized sensing matrix", formatter_class=formatter)
    pm.add_argument("--m", type=int, required=True, help="Rows (measurements)")
    pm.add_argument("--n", type=int, required=True, help="Columns (atoms)")
    pm.add_argument("--corr-T", dest="corr_T", type=float, default=0.0, help="Correlation level; 0 for Gaussian")
    pm.add_argument("--seed", type=int, default=0, help="Master seed")
    pm.add_argument("--out", required=True, help="Matrix CSV to write")
    pm.set_defaults(func=cmd_gen_matrix)

    ps = sub.add_parser("gen-signal", help="Draw a K-sparse signal", formatter_class=formatter)
    ps.add_argument("--n", type=int, required=True, help="Signal length")
    ps.add_argument("--k", type=int, required=True, help="Number of nonzeros")
    ps.add_argument("--seed", type=int, default=0, help="Master seed")
    ps.add_argument("--magnitude", choices=["gaussian", "equal"], default="gaussian", help="Nonzero distribution; equal gives +-1")
    ps.add_argument("--out", required=True, help="Signal CSV to write")
    ps.set_defaults(func=cmd_gen_signal)

    pr = sub.add_parser("recover", help="Run one greedy recovery", formatter_class=formatter)
    _add_problem_arguments(pr)
    pr.add_argument("--json", default=None, help="Also save the result document to this path")
    pr.set_defaults(func=cmd_recover)

    pa = sub.add_parser("analyze", help="Recovery plus per-iteration proof diagnostics", formatter_class=formatter)
    _add_problem_arguments(pa)
    pa.set_defaults(func=cmd_analyze)

    pw = sub.add_parser("sweep", help="Monte-Carlo sweep from a JSON description", formatter_class=formatter)
    pw.add_argument("--spec", required=True, help="Sweep JSON")
    pw.add_argument("--out", default=None, help="CSV path; a JSON mirror is written next to it")
    pw.add_argument("--workers", type=int, default=settings.BENCH_WORKERS, help="Worker threads")
    pw.set_defaults(func=cmd_sweep)

    pc = sub.add_parser("ric", help="Exact or sampled restricted isometry constant", formatter_class=formatter)
    pc.add_argument("--matrix", required=True, help="Matrix CSV ('m,n' header)")
    pc.add_argument("--order", type=int, required=True, help="RIC order k")
    pc.add_argument("--samples", type=int, default=None, help="Sample this many supports instead of enumerating")
    pc.add_argument("--seed", type=int, default=0, help="Seed for --samples")
    pc.add_argument("--budget", type=int, default=settings.RIC_ENUMERATION_BUDGET, help="Maximum supports to enumerate")
    pc.add_argument("--normalize", action="store_true", help="Normalize columns on load")
    pc.set_defaults(func=cmd_ric)

    pk = sub.add_parser("check", help="Numerical checks of the recovery guarantees", formatter_class=formatter)
    which = pk.add_mutually_exclusive_group(required=True)
    which.add_argument("--lemmas", action="store_true", help="Supporting RIC lemmas")
    which.add_argument("--theorem1", action="store_true", help="Noiseless guarantee")
    which.add_argument("--theorem2", action="store_true", help="Noisy guarantee")
    pk.add_argument("--seed", type=int, default=0, help="Master seed")
    pk.add_argument("--trials", type=int, default=25, help="Lemma trials, or certified theorem instances")
    pk.add_argument("--matrix", default=None, help="Matrix for --lemmas; drawn from --m/--n/--seed otherwise")
    pk.add_argument("--m", type=int, default=32, help="Rows of the drawn lemma dictionary")
    pk.add_argument("--n", type=int, default=10, help="Columns of the drawn lemma dictionary")
    pk.add_argument("--snr-factor", type=float, default=2.0, help="Multiple of the snr threshold (--theorem2)")
    pk.add_argument("--normalize", action="store_true", help="Normalize columns of --matrix on load")
    pk.set_defaults(func=cmd_check)

    pf = sub.add_parser("flops", help="Closed-form flop count", formatter_class=formatter)
    pf.add_argument("--alg", choices=ALGORITHMS, required=True, help="Algorithm")
    pf.add_argument("--k", type=int, required=True, help="Sparsity")
    pf.add_argument("--m", type=int, required=True, help="Measurements")
    pf.add_argument("--n", type=int, required=True, help="Signal length")
    pf.add_argument("--big-n", type=int, default=1, help="gOMP selection width N")
    pf.add_argument("--s", type=int, default=None, help="gOMP iteration count; defaults to K")
    pf.set_defaults(func=cmd_flops)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except argparse.ArgumentTypeError as e:
        parser.error(str(e))
    except (SparseRecoveryError, OSError, ValidationError) as e:
        logging.error(f"[cli] {args.cmd} failed: {exception_message(e)}")
        sys.stderr.write(f"error: {exception_message(e)}\n")
        return 1
    _print({"command": args.cmd, "options": _echo(args), **payload})
    return 0


if __name__ == "__main__":
    sys.exit(main())

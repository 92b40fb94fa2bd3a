"""Command-line interface: sample, count, bench, verify.

Exit codes: 0 success, 1 statistical failure, 2 invalid instance or
arguments, 3 enumeration guard exceeded.  Output is JSON-lines by
default (one record per line) and is byte-identical for identical
(command line, graph file, seed).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import secrets
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import counting, sampler, stats
from .errors import BicircError, GraphFormatError, InvalidInstance, TooLarge, ZeroRatio
from .graph import Graph, parse_edge_list, validate_bicircular_instance
from .rng import ResamplingTable, derive_seed


def _load_graph(path: str) -> Graph:
    with open(path, "rb") as fh:
        return parse_edge_list(fh.read())


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed & ((1 << 64) - 1)
    env = os.environ.get("BICIRC_SEED")
    if env is not None:
        return int(env) & ((1 << 64) - 1)
    seed = secrets.randbits(64)
    print(f"using seed {seed} (pass --seed to reproduce)", file=sys.stderr)
    return seed


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        keys = sorted(record)
        values = []
        for k in keys:
            v = record[k]
            if isinstance(v, (list, tuple)):
                v = ",".join(str(x) for x in v)
            values.append(f"{k}={v}")
        print("\t".join(values))


def cmd_sample(args) -> int:
    g = _load_graph(args.graph)
    validate_bicircular_instance(g)
    master = _resolve_seed(args)
    use_gibbs = args.gibbs or (args.gamma2, args.gamma) != (0.0, 0.5)
    if not (0.0 <= args.gamma2 <= 1.0) or not (0.0 < args.gamma <= 1.0):
        raise InvalidInstance("gamma2 must be in [0,1] and gamma in (0,1]")

    def one(i: int) -> dict:
        seed = derive_seed(master, 0, i)
        if use_gibbs:
            rep = sampler.sample_gibbs(g, seed, args.gamma2, args.gamma)
        else:
            rep = sampler.sample_basis(g, seed)
        return rep.to_json_dict()

    with ThreadPoolExecutor(max_workers=max(1, args.parallel)) as pool:
        for record in pool.map(one, range(args.samples)):
            _emit(record, args.format)
    return 0


def cmd_count(args) -> int:
    g = _load_graph(args.graph)
    validate_bicircular_instance(g)
    seed = _resolve_seed(args)
    if args.method == "exact":
        est = counting.count_exact(g, seed)
    elif args.method == "telescope":
        est = counting.count_fpras_telescope(g, args.epsilon, seed)
    else:
        est = counting.count_fpras_anneal(g, args.epsilon, seed)
    _emit(est.to_json_dict(), args.format)
    return 0


def cmd_bench(args) -> int:
    g = _load_graph(args.graph)
    validate_bicircular_instance(g)
    master = _resolve_seed(args)
    seeds = [derive_seed(master, 5, i) for i in range(args.trials)]
    _, resampled, steps = sampler.sample_lerw_batch(g, seeds, sampler.Deterministic())
    record = {
        "n": g.n,
        "m": g.m,
        "trials": args.trials,
        "mean_resampled": float(np.mean(resampled)),
        "stddev_resampled": float(np.std(resampled, ddof=1)),
        "mean_steps": float(np.mean(steps)),
        "stddev_steps": float(np.std(steps, ddof=1)),
        "bound": 2 * g.n * g.n - g.n,
        "seed": master,
    }
    _emit(record, args.format)
    return 0


def verify_graph(
    g: Graph, seed: int, samples: int, trials: int, significance: float = 1e-3
) -> list[dict]:
    """The four statistical checks behind `bicirc verify`."""
    checks: list[dict] = []

    # 1. Uniformity over bases.
    bases = counting.enumerate_bases(g)
    seeds = [derive_seed(seed, 10, i) for i in range(samples)]
    arrows, resampled, _ = sampler.sample_lerw_batch(g, seeds, sampler.Deterministic())
    counts: dict = {}
    for row in arrows:
        key = frozenset(g.edge_id(v, int(row[v])) for v in range(g.n))
        counts[key] = counts.get(key, 0) + 1
    stat, threshold, ok = stats.chi_square_uniform_test(counts, bases, samples, significance)
    checks.append(
        {"check": "uniformity", "statistic": stat, "threshold": threshold, "passed": ok}
    )

    # 2. Gibbs distributions against exact enumeration weights.
    for idx, (g2, gm) in enumerate([(1.0, 1.0), (0.5, 1.0), (0.0, 1.0)]):
        probs = counting.exact_gibbs_distribution(g, g2, gm)
        seeds = [derive_seed(seed, 11 + idx, i) for i in range(samples)]
        arrows, resampled, _ = sampler.sample_lerw_batch(g, seeds, sampler.Gibbs(g2, gm))
        counts = {}
        for row in arrows:
            key = tuple(int(x) for x in row)
            counts[key] = counts.get(key, 0) + 1
        stat, df = stats.chi_square_gof(counts, probs, samples)
        threshold = stats.chi_square_threshold(df, significance)
        ok = stat < threshold
        if (g2, gm) == (1.0, 1.0):
            ok = ok and int(np.max(resampled)) == 0
        checks.append(
            {
                "check": f"gibbs({g2},{gm})",
                "statistic": stat,
                "threshold": threshold,
                "passed": ok,
            }
        )

    # 3. Expected resamples against the exact formula.
    expected = counting.exact_expected_resamples(g)
    seeds = [derive_seed(seed, 20, i) for i in range(trials)]
    _, resampled, _ = sampler.sample_lerw_batch(g, seeds, sampler.Deterministic())
    mean, se = stats.mean_and_se([float(x) for x in resampled])
    ok = abs(mean - expected) <= 3.0 * se
    checks.append(
        {
            "check": "expected-resamples",
            "statistic": mean,
            "expected": expected,
            "se": se,
            "passed": ok,
        }
    )

    # 4. Parallel vs sequential engines on a shared table.
    n_oi = min(trials, 1000)
    mismatches = 0
    for i in range(n_oi):
        s = derive_seed(seed, 21, i)
        rep_p = sampler.sample_parallel(g, ResamplingTable(g, s))
        rep_l = sampler.sample_lerw(g, ResamplingTable(g, s))
        if rep_p.basis != rep_l.basis or rep_p.resampled != rep_l.resampled:
            mismatches += 1
    checks.append(
        {
            "check": "order-invariance",
            "statistic": mismatches,
            "trials": n_oi,
            "passed": mismatches == 0,
        }
    )
    return checks


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    validate_bicircular_instance(g)
    seed = _resolve_seed(args)
    checks = verify_graph(g, seed, args.samples, args.trials)
    for record in checks:
        _emit(record, args.format)
    return 0 if all(c["passed"] for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bicirc",
        description="Perfect sampling and approximate counting of bicircular matroid bases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--graph", required=True, help="edge-list file ('u v' per line)")
        p.add_argument("--seed", type=int, default=None, help="64-bit seed (env BICIRC_SEED as fallback)")
        p.add_argument("--format", choices=["json", "tsv"], default="json")

    p = sub.add_parser("sample", help="draw bases or Gibbs arrow configurations")
    common(p)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--gamma2", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--gibbs", action="store_true", help="force the Gibbs engine even at (0, 0.5)")
    p.add_argument("--parallel", type=int, default=1, help="worker count; output is identical regardless")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("count", help="count bases exactly or by FPRAS")
    common(p)
    p.add_argument("--method", choices=["exact", "telescope", "anneal"], default="exact")
    p.add_argument("--epsilon", type=float, default=0.25)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bench", help="resample-count statistics vs the 2n^2-n bound")
    common(p)
    p.add_argument("--trials", type=int, default=20000)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="statistical self-checks against the exact oracles")
    common(p)
    p.add_argument("--samples", type=int, default=150000)
    p.add_argument("--trials", type=int, default=20000)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "epsilon") and not (0.0 < args.epsilon < 1.0):
        print("error: epsilon must be in (0, 1)", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (GraphFormatError, InvalidInstance, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except TooLarge as exc:
        print(f"error: TooLarge: {exc}", file=sys.stderr)
        return 3
    except ZeroRatio as exc:
        print(f"error: ZeroRatio: {exc}", file=sys.stderr)
        return 1
    except BicircError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

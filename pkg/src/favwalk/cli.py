"""Command-line front end: ``favwalk <command> [flags]``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import experiments as ex
from .oracle import STATISTICS, enumerate_paths, verify_all_paths, verify_invariants
from .rng import RecordedPath, Seed
from .stats import ScheduleSpec
from .tracker import WalkTracker

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_gammas(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad gamma list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("gamma grid must be nonempty")
    return values


def parse_thresholds(text: str) -> tuple[int, ...]:
    """'1,2,4' or 'a..b' (powers of two times a, up to b)."""
    try:
        if ".." in text:
            a, b = (int(v) for v in text.split(".."))
            if a < 1 or b < a:
                raise ValueError
            out = []
            while a <= b:
                out.append(a)
                a *= 2
            return tuple(out)
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad thresholds {text!r}")


def _add_run_flags(p, replicas_default):
    p.add_argument("--config", type=Path, help="JSON file of flag defaults")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicas", type=int, default=replicas_default)
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--schedule", default="geometric:2",
                   help="geometric:C, exppow:P or superexp")
    p.add_argument("--n-min", type=int, default=16)
    p.add_argument("--gammas", type=parse_gammas, default=ex.DEFAULT_GAMMAS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--extrema-from", type=int, default=10**4,
                   help="running extrema use checkpoints n >= this")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="favwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    parser.commands = sub.choices

    p = sub.add_parser("simulate", help="one replica, checkpoint CSV")
    _add_run_flags(p, 1)
    p.add_argument("--record-path", action="store_true",
                   help="keep the path and check every checkpoint against the oracle")

    p = sub.add_parser("sweep", help="many replicas, aggregate + summary CSV")
    _add_run_flags(p, 4)

    p = sub.add_parser("enumerate", help="exact law of a statistic over all 2^n paths")
    p.add_argument("n", type=int)
    p.add_argument("statistic", choices=STATISTICS)
    p.add_argument("--out", type=Path, help="CSV file (default: stdout)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="invariant and oracle checks")
    p.add_argument("n_exhaustive", type=int)
    p.add_argument("n_random", type=int)
    p.add_argument("len_random", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("--prefixes", type=int, default=100,
                   help="random prefixes checked per random path")

    p = sub.add_parser("invlt", help="inverse local times at the origin")
    p.add_argument("--config", type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--thresholds", type=parse_thresholds, default=parse_thresholds("1..512"))
    p.add_argument("--budget", type=int, default=2**21)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("out"))

    p = sub.add_parser("bench", help="single-thread tracker throughput")
    p.add_argument("--steps", type=int, default=10**8)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _config(args) -> ex.RunConfig:
    schedule = ScheduleSpec.parse(args.schedule, n_min=args.n_min)
    return ex.RunConfig(seed=args.seed, replicas=args.replicas, steps=args.steps,
                        schedule=schedule, gammas=args.gammas, workers=args.workers,
                        out_dir=args.out, record_path=getattr(args, "record_path", False),
                        extrema_from=args.extrema_from)


def cmd_simulate(args) -> int:
    if args.replicas != 1:
        raise UsageError("simulate runs exactly one replica; use sweep for more")
    config = _config(args)
    res = ex.simulate_replica(config, 0)
    ex.write_text(config.out_dir / "checkpoints.csv", ex.checkpoint_table([res]))
    ex.write_text(config.out_dir / "cardinality.csv", ex.cardinality_table([res]))
    bad_lemma = sum(not r.lemma_ok for r in res.records)
    if res.oracle_mismatches or bad_lemma:
        print(f"oracle mismatches: {res.oracle_mismatches}, lemma failures: {bad_lemma}",
              file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.replicas < 2:
        raise UsageError("sweep needs --replicas >= 2")
    config = _config(args)
    results = ex.run_replicas(config)
    ex.write_text(config.out_dir / "aggregate.csv", ex.checkpoint_table(results))
    ex.write_text(config.out_dir / "summary.csv", ex.summary_table(results))
    ex.write_text(config.out_dir / "cardinality.csv", ex.cardinality_table(results))
    if any(not r.lemma_ok for res in results for r in res.records):
        return EXIT_INVARIANT
    return EXIT_OK


def enumeration_csv(n: int, statistic: str, workers: int = 1) -> str:
    dist = enumerate_paths(n, statistic, blocks=max(1, workers), workers=workers)
    rows = [[v, float(p), dist.counts[v], 2**n] for v, p in dist.probabilities.items()]
    return ex.to_csv(["value", "probability", "paths", "total_paths"], rows)


def cmd_enumerate(args) -> int:
    text = enumeration_csv(args.n, args.statistic, args.workers)
    if args.out is None:
        sys.stdout.write(text)
    else:
        ex.write_text(args.out, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    if min(args.n_exhaustive, args.n_random, args.len_random) < 0:
        raise UsageError("verify arguments must be nonnegative")
    report = verify_all_paths(args.n_exhaustive)
    print(f"exhaustive n={args.n_exhaustive}: {report.prefixes} prefixes, "
          f"{report.lemma_checked} lemma checks, failures={report.failures}")
    for i in range(args.n_random):
        path = RecordedPath.from_seed(Seed(args.seed, i), args.len_random)
        rng = np.random.default_rng([args.seed, i])
        prefixes = set(rng.integers(0, args.len_random + 1, size=args.prefixes).tolist())
        prefixes.add(args.len_random)
        report.merge(verify_invariants(path, prefixes=prefixes), label=f"random path {i}")
    print(f"total: {report.prefixes} prefixes, failures={report.failures}, "
          f"first failure={report.first_failure}")
    return EXIT_OK if report.ok else EXIT_INVARIANT


def cmd_invlt(args) -> int:
    if args.replicas < 1 or args.budget < 1:
        raise UsageError("replicas and budget must be positive")
    per = ex.inverse_local_time_sweep(args.seed, args.replicas, args.thresholds,
                                      args.budget, args.workers)
    ex.write_text(args.out / "invlt.csv", ex.inverse_local_time_table(per))
    return EXIT_OK


def cmd_bench(args) -> int:
    WalkTracker(Seed(args.seed, 0)).run(1000)  # compile
    tracker = WalkTracker(Seed(args.seed, 0), capacity=1 << 16)
    t0 = time.perf_counter()
    tracker.run(args.steps)
    dt = time.perf_counter() - t0
    print(f"{args.steps} steps in {dt:.3f} s: {args.steps / dt:.4g} steps/s")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "enumerate": cmd_enumerate,
            "verify": cmd_verify, "invlt": cmd_invlt, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    config_path = getattr(args, "config", None)
    try:
        if config_path is not None:
            with open(config_path) as fh:
                defaults = json.load(fh)
            if not isinstance(defaults, dict):
                raise UsageError("config file must hold a JSON object")
            parser.commands[args.command].set_defaults(**{k.replace("-", "_"): v for k, v in defaults.items()})
            args = parser.parse_args(argv)
            for name, conv in (("gammas", parse_gammas), ("thresholds", parse_thresholds)):
                if isinstance(getattr(args, name, None), str):
                    setattr(args, name, conv(getattr(args, name)))
            if isinstance(getattr(args, "out", None), str):
                args.out = Path(args.out)
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"favwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"favwalk: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

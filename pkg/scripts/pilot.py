"""Pilot sweeps used to freeze the Monte Carlo acceptance thresholds.

    python scripts/pilot.py --seeds 101 102 103 --out tests/fixtures/pilot.json

Each seed runs 50 replicas of 10^8 steps on a geometric:1.5 grid.
"""
import argparse
import json
import time
from pathlib import Path

from favwalk import experiments as ex
from favwalk.stats import ScheduleSpec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, nargs="+", default=[101, 102, 103])
    ap.add_argument("--replicas", type=int, default=50)
    ap.add_argument("--steps", type=int, default=10**8)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args()

    runs = {}
    for seed in args.seeds:
        config = ex.RunConfig(seed=seed, replicas=args.replicas, steps=args.steps,
                              schedule=ScheduleSpec.parse("geometric:1.5"),
                              workers=args.workers)
        t0 = time.perf_counter()
        stats = ex.sweep_statistics(ex.run_replicas(config))
        stats["seconds"] = time.perf_counter() - t0
        print(seed, json.dumps(stats))
        runs[str(seed)] = stats
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(runs, indent=2) + "\n")


if __name__ == "__main__":
    main()

"""Replica runs, parallel sweeps and the CSV tables they produce."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .favorites import check_edge_downcross_lemma
from .oracle import brute_favorites, brute_local_times
from .rng import Seed
from .stats import (CheckpointRecord, RunningExtrema, ScheduleSpec,
                    inverse_local_times, record_checkpoint, schedule_points,
                    update_running_extrema)
from .tracker import WalkTracker

DEFAULT_GAMMAS = (0.5, 1.0, 2.0)
QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass
class RunConfig:
    seed: int = 0
    replicas: int = 1
    steps: int = 10**6
    schedule: ScheduleSpec = field(default_factory=ScheduleSpec)
    gammas: tuple[float, ...] = DEFAULT_GAMMAS
    thresholds: tuple[int, ...] = tuple(2**k for k in range(10))
    workers: int = 1
    out_dir: Path = Path("out")
    record_path: bool = False
    extrema_from: int = 10**4

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if self.steps < 16:
            raise ValueError("steps must be >= 16")
        if not self.gammas:
            raise ValueError("gamma grid must be nonempty")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        self.out_dir = Path(self.out_dir)
        self.gammas = tuple(float(g) for g in self.gammas)

    def checkpoints(self) -> list[int]:
        spec = ScheduleSpec(self.schedule.kind, self.schedule.param,
                            self.schedule.n_min, self.steps)
        pts = schedule_points(spec)
        if not pts or pts[-1] != self.steps:
            pts.append(self.steps)
        return pts


@dataclass
class ReplicaResult:
    replica: int
    records: list[CheckpointRecord]
    extrema: list[dict[str, float]]
    # decade d -> counts of times n in (10^d, 10^(d+1)] with #E(n) = 0,1,2,3,>=4
    decade_tally: dict[int, np.ndarray]
    oracle_mismatches: int = 0


def _decade(n: int) -> int:
    return len(str(n)) - 1


def simulate_replica(config: RunConfig, replica: int = 0) -> ReplicaResult:
    """One walk of ``config.steps`` steps, recorded at every checkpoint."""
    tracker = WalkTracker(Seed(config.seed, replica), capacity=1024,
                          record_path=config.record_path)
    checkpoints = config.checkpoints()
    decade_ends = [10**d for d in range(1, _decade(config.steps) + 1)]
    stops = sorted(set(checkpoints) | {s for s in decade_ends if s < config.steps})
    cp = set(checkpoints)
    extrema = RunningExtrema(config.extrema_from)
    records, snaps = [], []
    tally = {}
    mismatches = 0
    for stop in stops:
        before = tracker.tally.copy()
        tracker.run(stop)
        d = _decade(stop - 1)
        tally[d] = tally.get(d, 0) + (tracker.tally - before)
        if stop not in cp:
            continue
        fav = tracker.favorites()
        rec = record_checkpoint(stop, fav, tracker, config.gammas)
        records.append(rec)
        update_running_extrema(extrema, rec)
        snaps.append(extrema.snapshot())
        if config.record_path:
            path = tracker.recorded_path()
            if not (tracker.count_field().equals(brute_local_times(path, stop))
                    and fav == brute_favorites(path, stop)):
                mismatches += 1
    tally = {d: np.asarray(v) for d, v in sorted(tally.items())}
    return ReplicaResult(replica, records, snaps, tally, mismatches)


def run_replicas(config: RunConfig) -> list[ReplicaResult]:
    """All replicas, ordered by replica index whatever the worker count."""
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda r: simulate_replica(config, r),
                             range(config.replicas)))


# -- tables -------------------------------------------------------------------

def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def checkpoint_table(results: list[ReplicaResult]) -> str:
    columns = results[0].records[0].columns()
    ext_cols = sorted({k for res in results for snap in res.extrema for k in snap})
    rows = []
    for res in results:
        for rec, snap in zip(res.records, res.extrema):
            rows.append([res.replica] + rec.values()
                        + [snap.get(k, math.nan) for k in ext_cols])
    return to_csv(["replica"] + columns + ext_cols, rows)


def summary_table(results: list[ReplicaResult]) -> str:
    """Per checkpoint: cross-replica quantiles of each ratio and median running extrema."""
    first = results[0]
    ratio_cols = ["lil_edge", "lil_site_count", "lil_sbar"] + [
        f"gamma_{g:g}" for g in first.records[0].gamma_ratios]
    ext_cols = sorted({k for res in results for snap in res.extrema for k in snap})
    header = ["n", "replicas"]
    for c in ratio_cols:
        header += [f"{c}_q{int(q * 100):02d}" for q in QUANTILES]
    header += [f"{c}_median" for c in ext_cols]
    rows = []
    for i, rec0 in enumerate(first.records):
        recs = [res.records[i].as_dict() for res in results]
        row = [rec0.n, len(results)]
        for c in ratio_cols:
            row += list(np.quantile([r[c] for r in recs], QUANTILES))
        for c in ext_cols:
            vals = [res.extrema[i][c] for res in results if c in res.extrema[i]]
            row.append(float(np.median(vals)) if vals else math.nan)
        rows.append(row)
    return to_csv(header, rows)


def cardinality_table(results: list[ReplicaResult]) -> str:
    header = ["replica", "n_from", "n_to", "card_E_0", "card_E_1",
              "card_E_2", "card_E_3", "card_E_ge4"]
    rows = []
    for res in results:
        for d, t in res.decade_tally.items():
            rows.append([res.replica, 10**d if d else 1, 10 ** (d + 1)] + [int(v) for v in t])
    return to_csv(header, rows)


def decade_totals(results: list[ReplicaResult]) -> dict[int, np.ndarray]:
    out: dict[int, np.ndarray] = {}
    for res in results:
        for d, t in res.decade_tally.items():
            out[d] = out.get(d, 0) + t
    return dict(sorted(out.items()))


def running_value_at(result: ReplicaResult, key: str, n: int) -> float:
    """Running extremum ``key`` as of the last checkpoint <= n."""
    value = math.nan
    for rec, snap in zip(result.records, result.extrema):
        if rec.n > n:
            break
        value = snap.get(key, math.nan)
    return value


# -- other experiments -----------------------------------------------------------

@dataclass
class LemmaCheckResult:
    paths: int
    checks: int
    skipped_degenerate: int
    violations: list[tuple[int, int]]  # (replica, n)


def lemma_random_check(seed: int, n_paths: int, length: int, n_times: int,
                       workers: int = 1) -> LemmaCheckResult:
    """Check the edge/downcrossing implication at random times of long walks."""

    def one(p):
        times = np.random.default_rng([seed, p]).integers(1, length + 1, size=n_times)
        tracker = WalkTracker(Seed(seed, p), capacity=4096)
        checks = skipped = 0
        bad = []
        for t in np.sort(times):
            tracker.run(int(t))
            fav = tracker.favorites()
            if fav.degenerate:
                skipped += 1
                continue
            checks += 1
            if not check_edge_downcross_lemma(fav):
                bad.append((p, int(t)))
        return checks, skipped, bad

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(one, range(n_paths)))
    return LemmaCheckResult(n_paths, sum(c for c, _, _ in parts),
                            sum(s for _, s, _ in parts),
                            [v for _, _, b in parts for v in b])


def inverse_local_time_sweep(seed: int, replicas: int, thresholds, budget: int,
                             workers: int = 1):
    """Per replica list of InverseLocalTimeRecord, in replica order."""
    th = tuple(int(r) for r in thresholds)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: inverse_local_times(Seed(seed, r), th, budget),
                             range(replicas)))


def inverse_local_time_table(per_replica) -> str:
    rows = []
    for rep, recs in enumerate(per_replica):
        for rec in recs:
            ratio = (math.log(rec.T_r) / math.log(rec.r)
                     if rec.complete and rec.r > 1 and rec.T_r > 0 else math.nan)
            rows.append([rep, rec.r, rec.T_r if rec.complete else "", int(rec.complete), ratio])
    return to_csv(["replica", "r", "T_r", "complete", "log_T_over_log_r"], rows)


def median_log_ratio(per_replica, r: int) -> float:
    """Median of log T_r / log r; unfinished walks count as +inf (T_r > budget)."""
    vals = []
    for recs in per_replica:
        for rec in recs:
            if rec.r == r:
                vals.append(math.log(rec.T_r) / math.log(r) if rec.complete else math.inf)
    vals.sort()
    k = len(vals)
    if k == 0:
        raise ValueError(f"no records for r={r}")
    mid = vals[(k - 1) // 2], vals[k // 2]
    return (mid[0] + mid[1]) / 2


def sweep_statistics(results: list[ReplicaResult], n_early: int = 10**6,
                     gamma_above: float = 2.0, gamma_below: float = 0.5) -> dict:
    """Cross-replica summaries of the long-run trend experiments."""
    final = [res.extrema[-1] for res in results]
    n_final = results[0].records[-1].n
    above = below = 0
    for res in results:
        a_early = running_value_at(res, f"runmin_gamma_{gamma_above:g}", n_early)
        a_late = running_value_at(res, f"runmin_gamma_{gamma_above:g}", n_final)
        b_early = running_value_at(res, f"runmin_gamma_{gamma_below:g}", n_early)
        b_late = running_value_at(res, f"runmin_gamma_{gamma_below:g}", n_final)
        above += a_late >= a_early
        below += b_late < b_early
    totals = decade_totals(results)
    return {
        "replicas": len(results),
        "n_final": n_final,
        "median_runmax_lil_edge": float(np.median([s["runmax_lil_edge"] for s in final])),
        "median_runmax_lil_site_count": float(np.median([s["runmax_lil_site_count"] for s in final])),
        "median_runmax_lil_sbar": float(np.median([s["runmax_lil_sbar"] for s in final])),
        "frac_runmin_kept_gamma_above": above / len(results),
        "frac_runmin_dropped_gamma_below": below / len(results),
        "card_E_ge4_by_decade": {d: int(t[4]) for d, t in totals.items()},
        "lemma_failures": sum(not r.lemma_ok for res in results for r in res.records),
    }


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path

"""Ground truth by direct recomputation and exhaustive path enumeration."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numba as nb
import numpy as np

from .favorites import ArgmaxSet, FavoritesState, check_edge_downcross_lemma
from .localtime import INVARIANTS, CountField
from .rng import RecordedPath

MAX_ENUMERATION_LENGTH = 24

STATISTICS = ("card_K", "card_E", "card_KD", "xi_star", "L_star",
              "xi_D_star", "minabs_E", "maxabs_E", "sbar")


def brute_local_times(path: RecordedPath, m: int | None = None) -> CountField:
    """Count field of the first ``m`` steps, straight from the definitions."""
    if m is None:
        m = path.length
    if not 0 <= m <= path.length:
        raise ValueError(f"prefix length {m} outside [0, {path.length}]")
    s = path.positions()[: m + 1]
    lo, hi = int(s.min()), int(s.max())
    size = hi - lo + 1
    xi = np.bincount(s - lo, minlength=size)
    d = np.diff(s)
    arrivals = s[1:] - lo
    up = np.bincount(arrivals[d == 1], minlength=size)
    down = np.bincount(arrivals[d == -1], minlength=size)
    return CountField(m, int(s[-1]), lo, hi, xi.astype(np.int64),
                      up.astype(np.int64), down.astype(np.int64))


def _argmax(values: np.ndarray, labels: np.ndarray) -> ArgmaxSet:
    if values.size == 0:
        return ArgmaxSet(0, ())
    top = int(values.max())
    return ArgmaxSet(top, tuple(int(x) for x in labels[values == top]))


def brute_favorites(path: RecordedPath, m: int | None = None) -> FavoritesState:
    f = brute_local_times(path, m)
    down = _argmax(f.down, f.sites)
    return FavoritesState(f.n, _argmax(f.xi, f.sites),
                          _argmax(f.edge_counts(), f.edges), down,
                          degenerate=down.max_value == 0)


# -- exhaustive enumeration -------------------------------------------------

@nb.njit(cache=True, nogil=True)
def _path_statistic(index, n, stat, xi, up, down):
    """One statistic of the path encoded by the bits of ``index``."""
    size = xi.shape[0]
    xi[:] = 0
    up[:] = 0
    down[:] = 0
    off = n + 1
    pos = 0
    xi[off] = 1
    lo = 0
    hi = 0
    for k in range(n):
        if (index >> k) & 1:
            pos += 1
            up[pos + off] += 1
        else:
            pos -= 1
            down[pos + off] += 1
        xi[pos + off] += 1
        lo = min(lo, pos)
        hi = max(hi, pos)
    if stat == 8:
        return hi
    best_site = 0
    best_edge = 0
    best_down = 0
    for c in range(size):
        best_site = max(best_site, xi[c])
        best_down = max(best_down, down[c])
        if c > 0:
            best_edge = max(best_edge, up[c] + down[c - 1])
    if stat == 3:
        return best_site
    if stat == 4:
        return best_edge
    if stat == 5:
        return best_down
    card_k = 0
    card_e = 0
    card_kd = 0
    min_e = size
    max_e = -1
    for x in range(lo, hi + 1):
        c = x + off
        if xi[c] == best_site:
            card_k += 1
        if down[c] == best_down:
            card_kd += 1
        if x > lo and up[c] + down[c - 1] == best_edge:
            card_e += 1
            min_e = min(min_e, abs(x))
            max_e = max(max_e, abs(x))
    if stat == 0:
        return card_k
    if stat == 1:
        return card_e
    if stat == 2:
        return card_kd
    if stat == 6:
        return min_e
    return max_e


@nb.njit(cache=True, nogil=True)
def _enumerate_block(n, stat, start, stop, hist):
    xi = np.zeros(2 * n + 3, dtype=np.int64)
    up = np.zeros(2 * n + 3, dtype=np.int64)
    down = np.zeros(2 * n + 3, dtype=np.int64)
    for index in range(start, stop):
        hist[_path_statistic(index, n, stat, xi, up, down)] += 1


@dataclass(frozen=True)
class ExactDistribution:
    n: int
    statistic: str
    counts: dict[int, int]

    @property
    def probabilities(self) -> dict[int, Fraction]:
        total = 2**self.n
        return {v: Fraction(c, total) for v, c in sorted(self.counts.items())}

    @property
    def expectation(self) -> Fraction:
        return sum((v * p for v, p in self.probabilities.items()), Fraction(0))


def enumerate_paths(n: int, statistic: str, blocks: int = 1,
                    workers: int = 1) -> ExactDistribution:
    """Exact law of ``statistic`` at time n over all 2**n equally likely paths.

    Path indices are split into ``blocks`` contiguous ranges whose histograms
    are summed, so the result does not depend on the split.
    """
    if not 0 <= n <= MAX_ENUMERATION_LENGTH:
        raise ValueError(f"n must lie in [0, {MAX_ENUMERATION_LENGTH}], got {n}")
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {STATISTICS}")
    if statistic in ("card_E", "L_star", "minabs_E", "maxabs_E") and n == 0:
        raise ValueError(f"{statistic} is undefined before the first step")
    stat = STATISTICS.index(statistic)
    total = 2**n
    blocks = max(1, min(int(blocks), total))
    bounds = [total * i // blocks for i in range(blocks + 1)]
    hists = [np.zeros(2 * n + 3, dtype=np.int64) for _ in range(blocks)]

    def work(i):
        _enumerate_block(n, stat, bounds[i], bounds[i + 1], hists[i])

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        list(pool.map(work, range(blocks)))
    hist = np.sum(hists, axis=0)
    return ExactDistribution(n, statistic,
                             {int(v): int(c) for v, c in enumerate(hist) if c})


# -- invariant verification -------------------------------------------------

CHECKS = INVARIANTS + ("oracle_counts", "oracle_favorites", "edge_downcross_lemma")


@dataclass
class InvariantReport:
    """Prefix-by-prefix outcome of every check; failures are data."""

    prefixes: int = 0
    lemma_checked: int = 0
    failures: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CHECKS})
    first_failure: tuple[int, str] | None = None
    rows: list[tuple[int, dict[str, bool]]] | None = None

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def merge(self, other: "InvariantReport", label=None) -> None:
        self.prefixes += other.prefixes
        self.lemma_checked += other.lemma_checked
        for k, v in other.failures.items():
            self.failures[k] += v
        if self.first_failure is None and other.first_failure is not None:
            m, name = other.first_failure
            self.first_failure = (m, name) if label is None else (m, f"{name} [{label}]")


def _prefix_checks(tracker, path, m) -> dict[str, bool]:
    fav = tracker.favorites()
    result = {name: True for name in CHECKS}
    for name in tracker.invariant_failures():
        result[name] = False
    result["oracle_counts"] = tracker.count_field().equals(brute_local_times(path, m))
    result["oracle_favorites"] = fav == brute_favorites(path, m)
    if m >= 1 and not fav.degenerate:
        result["edge_downcross_lemma"] = check_edge_downcross_lemma(fav)
    else:
        result["edge_downcross_lemma"] = None
    return result


def verify_invariants(path: RecordedPath, tracker_factory=None,
                      prefixes=None, keep_rows: bool = False) -> InvariantReport:
    """Run a tracker along ``path`` and check it at every prefix (or at ``prefixes``).

    The lemma check is skipped at n = 0 and while every downcrossing count
    is still zero.
    """
    if tracker_factory is None:
        from .tracker import WalkTracker as tracker_factory
    tracker = tracker_factory()
    if prefixes is None:
        prefixes = range(path.length + 1)
    report = InvariantReport(rows=[] if keep_rows else None)
    for m in sorted(set(int(p) for p in prefixes)):
        if m > tracker.n:
            tracker.feed(path.steps[tracker.n:m])
        checks = _prefix_checks(tracker, path, m)
        report.prefixes += 1
        if checks["edge_downcross_lemma"] is not None:
            report.lemma_checked += 1
        for name, passed in checks.items():
            if passed is False:
                report.failures[name] += 1
                if report.first_failure is None:
                    report.first_failure = (m, name)
        if keep_rows:
            report.rows.append((m, checks))
    return report


def verify_all_paths(n: int, tracker_factory=None) -> InvariantReport:
    """verify_invariants over every one of the 2**n paths of length n."""
    total = InvariantReport()
    for index in range(2**n):
        path = RecordedPath.from_index(index, n)
        total.merge(verify_invariants(path, tracker_factory), label=f"path {index}")
    return total

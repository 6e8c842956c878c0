"""Scaled functionals at checkpoint times, running extrema, inverse local times."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernel as K
from .favorites import FavoritesState, check_edge_downcross_lemma, extremal_abs
from .rng import Seed

MIN_CHECKPOINT = 16
SCHEDULE_KINDS = ("geometric", "exppow", "superexp")


@dataclass(frozen=True)
class ScheduleSpec:
    kind: str = "geometric"
    param: Fraction | None = Fraction(2)
    n_min: int = MIN_CHECKPOINT
    n_max: int = 10**6

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"schedule kind must be one of {SCHEDULE_KINDS}")
        if self.n_min < MIN_CHECKPOINT:
            raise ValueError(f"n_min must be >= {MIN_CHECKPOINT}")
        if self.kind == "superexp":
            object.__setattr__(self, "param", None)
        else:
            p = Fraction(str(self.param)) if not isinstance(self.param, Fraction) else self.param
            if p <= 1:
                raise ValueError(f"{self.kind} parameter must exceed 1, got {p}")
            object.__setattr__(self, "param", p)

    @classmethod
    def parse(cls, text: str, n_min: int = MIN_CHECKPOINT, n_max: int = 10**6):
        """'geometric:1.5', 'exppow:1.5' or 'superexp'."""
        kind, _, param = text.partition(":")
        if kind == "superexp":
            if param:
                raise ValueError("superexp takes no parameter")
            return cls(kind, None, n_min, n_max)
        if not param:
            raise ValueError(f"schedule {kind!r} needs a parameter, e.g. {kind}:1.5")
        return cls(kind, Fraction(param), n_min, n_max)

    def __str__(self):
        return self.kind if self.param is None else f"{self.kind}:{self.param}"


def _ceil_exp(x: float) -> int:
    return math.ceil(math.exp(x))


def schedule_points(spec: ScheduleSpec) -> list[int]:
    """Strictly increasing checkpoint times inside [n_min, n_max]."""
    lo, hi = spec.n_min, spec.n_max
    pts = []
    if lo > hi:
        return pts
    if spec.kind == "geometric":
        value = Fraction(lo)
        while True:
            point = math.ceil(value)
            if point > hi:
                break
            pts.append(point)
            value *= spec.param
    elif spec.kind == "exppow":
        p = float(spec.param)
        k = 1
        while k**p <= math.log(hi) + 1:
            point = _ceil_exp(k**p)
            if lo <= point <= hi:
                pts.append(point)
            k += 1
    else:
        k = 1
        while k ** (5 * k) <= hi:
            if k ** (5 * k) >= lo:
                pts.append(k ** (5 * k))
            k += 1
    return sorted(set(pts))


def lil_ratio(n: int, a: float) -> float:
    """a / sqrt(2 n log log n), natural logarithms."""
    if n < MIN_CHECKPOINT:
        raise ValueError(f"lil_ratio needs n >= {MIN_CHECKPOINT}, got {n}")
    return a / math.sqrt(2.0 * n * math.log(math.log(n)))


def gamma_ratio(n: int, a: float, gamma: float) -> float:
    """a / (sqrt(n) (log n)^-gamma)."""
    if n < 3:
        raise ValueError(f"gamma_ratio needs n >= 3, got {n}")
    return a * math.log(n) ** gamma / math.sqrt(n)


def escape_radius(n: int, gamma: float) -> float:
    """sqrt(n) (log n)^-gamma."""
    return math.sqrt(n) * math.log(n) ** -gamma


@dataclass(frozen=True)
class CheckpointRecord:
    n: int
    xi_star: int
    L_star: int
    card_K: int
    card_E: int
    card_KD: int
    minabs_E: int
    maxabs_E: int
    minabs_K: int
    maxabs_K: int
    minabs_KD: int
    maxabs_KD: int
    lil_edge: float
    lil_site_count: float
    sbar: int
    lil_sbar: float
    degenerate_KD: bool
    lemma_ok: bool
    gamma_ratios: dict[float, float] = field(default_factory=dict)
    # max L minus max of L over |x| <= sqrt(n)(log n)^-gamma; kept raw
    gaps: dict[float, int] = field(default_factory=dict)

    SCALARS = ("n", "xi_star", "L_star", "card_K", "card_E", "card_KD",
               "minabs_E", "maxabs_E", "minabs_K", "maxabs_K", "minabs_KD",
               "maxabs_KD", "lil_edge", "lil_site_count", "sbar", "lil_sbar",
               "degenerate_KD", "lemma_ok")

    def columns(self) -> list[str]:
        return (list(self.SCALARS)
                + [f"gamma_{g:g}" for g in self.gamma_ratios]
                + [f"gap_{g:g}" for g in self.gaps])

    def values(self) -> list:
        return ([getattr(self, c) for c in self.SCALARS]
                + list(self.gamma_ratios.values()) + list(self.gaps.values()))

    def as_dict(self) -> dict:
        return dict(zip(self.columns(), self.values()))


def record_checkpoint(n: int, favorites: FavoritesState, tracker,
                      gammas=(0.5, 1.0, 2.0)) -> CheckpointRecord:
    """Assemble every scaled functional at time n from a tracker's state."""
    if n < MIN_CHECKPOINT:
        raise ValueError(f"checkpoints need n >= {MIN_CHECKPOINT}, got {n}")
    if favorites.n != n or tracker.n != n:
        raise ValueError("favorites and tracker must both be at time n")
    e_min, e_max = extremal_abs(favorites.edges.members)
    k_min, k_max = extremal_abs(favorites.sites.members)
    d_min, d_max = extremal_abs(favorites.downcross.members)
    sbar = tracker.hi
    l_star = favorites.edges.max_value
    return CheckpointRecord(
        n=n,
        xi_star=favorites.sites.max_value,
        L_star=l_star,
        card_K=len(favorites.sites),
        card_E=len(favorites.edges),
        card_KD=len(favorites.downcross),
        minabs_E=e_min, maxabs_E=e_max,
        minabs_K=k_min, maxabs_K=k_max,
        minabs_KD=d_min, maxabs_KD=d_max,
        lil_edge=lil_ratio(n, e_max),
        lil_site_count=lil_ratio(n, favorites.sites.max_value),
        sbar=sbar,
        lil_sbar=lil_ratio(n, sbar),
        degenerate_KD=favorites.degenerate,
        lemma_ok=favorites.degenerate or check_edge_downcross_lemma(favorites),
        gamma_ratios={float(g): gamma_ratio(n, e_min, g) for g in gammas},
        gaps={float(g): l_star - tracker.max_edge_count_within(escape_radius(n, g))
              for g in gammas},
    )


class RunningExtrema:
    """Running min and max of each ratio over checkpoints with n >= n_from.

    These stand in for liminf / limsup along the checkpoint grid.
    """

    TRACKED = ("lil_edge", "lil_site_count", "lil_sbar")

    def __init__(self, n_from: int = MIN_CHECKPOINT):
        self.n_from = n_from
        self.min: dict[str, tuple[float, int]] = {}
        self.max: dict[str, tuple[float, int]] = {}

    def snapshot(self) -> dict[str, float]:
        out = {}
        for name, (v, _) in self.max.items():
            out[f"runmax_{name}"] = v
        for name, (v, _) in self.min.items():
            out[f"runmin_{name}"] = v
        return out


def _tracked_values(record: CheckpointRecord) -> dict[str, float]:
    values = {name: getattr(record, name) for name in RunningExtrema.TRACKED}
    for g, v in record.gamma_ratios.items():
        values[f"gamma_{g:g}"] = v
    return values


def update_running_extrema(extrema: RunningExtrema,
                           record: CheckpointRecord) -> RunningExtrema:
    if record.n < extrema.n_from:
        return extrema
    for name, v in _tracked_values(record).items():
        if name not in extrema.min or v < extrema.min[name][0]:
            extrema.min[name] = (v, record.n)
        if name not in extrema.max or v > extrema.max[name][0]:
            extrema.max[name] = (v, record.n)
    return extrema


@dataclass(frozen=True)
class InverseLocalTimeRecord:
    r: int
    T_r: int | None  # None: budget ran out first

    @property
    def complete(self) -> bool:
        return self.T_r is not None


def _check_thresholds(thresholds) -> np.ndarray:
    th = np.asarray(list(thresholds), dtype=np.int64)
    if th.size == 0 or th[0] < 0 or np.any(np.diff(th) <= 0):
        raise ValueError("thresholds must be strictly increasing nonnegative integers")
    return th


def inverse_local_time_track(tracker, thresholds, budget: int) -> list[InverseLocalTimeRecord]:
    """T_r = first n with xi(0, n) > r, read off a full tracker.

    The tracker is advanced along its own stream, never past ``budget``.
    """
    th = _check_thresholds(thresholds)
    out = []
    for r in th:
        t = tracker.run_until_origin_count(int(r), budget)
        out.append(InverseLocalTimeRecord(int(r), t))
    return out


def inverse_local_times(seed: Seed, thresholds, budget: int) -> list[InverseLocalTimeRecord]:
    """Same quantities from a position-only walk; much cheaper per step."""
    th = _check_thresholds(thresholds)
    out = np.full(th.shape[0], -1, dtype=np.int64)
    k0, k1 = seed.key
    K.origin_passage_kernel(k0, k1, seed.sid, th, int(budget), out)
    return [InverseLocalTimeRecord(int(r), int(t) if t >= 0 else None)
            for r, t in zip(th, out)]

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from favwalk.oracle import brute_favorites
from favwalk.rng import RecordedPath, Seed
from favwalk.stats import (RunningExtrema, ScheduleSpec, escape_radius, gamma_ratio,
                           inverse_local_time_track, inverse_local_times, lil_ratio,
                           record_checkpoint, schedule_points, update_running_extrema)
from favwalk.tracker import WalkTracker


def test_geometric_schedule():
    assert schedule_points(ScheduleSpec("geometric", 2, 16, 128)) == [16, 32, 64, 128]


def test_exppow_schedule_first_point():
    pts = schedule_points(ScheduleSpec("exppow", Fraction(3, 2), 16, 10**6))
    # exp(2^1.5) = 16.918..., exp(1) < 16 is excluded
    assert pts[:3] == [17, 181, 2981]
    assert pts == [17, 181, 2981, 71707]


def test_superexp_schedule():
    assert schedule_points(ScheduleSpec("superexp", None, 16, 10**8)) == [1024, 14348907]


def test_empty_schedule_and_bad_specs():
    assert schedule_points(ScheduleSpec("geometric", 2, 200, 100)) == []
    with pytest.raises(ValueError):
        ScheduleSpec("geometric", 1, 16, 100)
    with pytest.raises(ValueError):
        ScheduleSpec("linear", 2, 16, 100)
    with pytest.raises(ValueError):
        ScheduleSpec("geometric", 2, 8, 100)
    assert ScheduleSpec.parse("geometric:1.5").param == Fraction(3, 2)
    assert ScheduleSpec.parse("superexp").param is None


def test_geometric_schedule_is_exact_for_fractional_ratio():
    pts = schedule_points(ScheduleSpec("geometric", Fraction(3, 2), 16, 10**8))
    expected = []
    k = 0
    while True:
        v = -((-16 * 3**k) // 2**k)  # exact ceiling
        if v > 10**8:
            break
        expected.append(v)
        k += 1
    assert pts == sorted(set(expected))


@given(st.sampled_from(["geometric:1.1", "geometric:3", "exppow:1.2", "exppow:2", "superexp"]),
       st.integers(16, 10**5), st.integers(16, 10**9))
def test_schedules_strictly_increasing_in_range(text, lo, hi):
    spec = ScheduleSpec.parse(text, lo, hi)
    pts = schedule_points(spec)
    assert all(a < b for a, b in zip(pts, pts[1:]))
    assert all(lo <= p <= hi for p in pts)


def test_lil_ratio_values():
    n = 10**6
    assert lil_ratio(n, math.sqrt(2 * n * math.log(math.log(n)))) == pytest.approx(1.0, rel=1e-15)
    assert lil_ratio(n, 0) == 0.0
    # 30-digit mpmath evaluation of 10^3 / sqrt(2 10^6 log log 10^6)
    assert lil_ratio(n, 10**3) == pytest.approx(0.436369963018331699, rel=1e-13)
    with pytest.raises(ValueError):
        lil_ratio(15, 1)


def test_gamma_ratio_values():
    assert gamma_ratio(400, 7, 0) == pytest.approx(7 / 20)
    n, g = 5000, 1.7
    assert gamma_ratio(n, escape_radius(n, g), g) == pytest.approx(1.0)
    assert gamma_ratio(10**4, 100, 1) == pytest.approx(9.21034037197618273, rel=1e-13)
    with pytest.raises(ValueError):
        gamma_ratio(2, 1, 1)


@given(st.integers(3, 10**12), st.floats(0.01, 1e6), st.floats(-3, 3), st.floats(0.01, 2),
       st.floats(0.1, 10))
def test_ratio_monotonicity_and_homogeneity(n, a, g, dg, c):
    assert gamma_ratio(n, a, g + dg) > gamma_ratio(n, a, g)  # log n > 1 for n >= 3
    assert gamma_ratio(n, c * a, g) == pytest.approx(c * gamma_ratio(n, a, g), rel=1e-12)
    if n >= 16:
        assert lil_ratio(n, c * a) == pytest.approx(c * lil_ratio(n, a), rel=1e-12)


def test_record_on_alternating_path():
    steps = [1, -1] * 8
    t = WalkTracker().feed(steps)
    fav = t.favorites()
    rec = record_checkpoint(16, fav, t, gammas=(0.5, 1.0, 2.0))
    ref = brute_favorites(RecordedPath(steps))
    assert rec.maxabs_E == 1 and rec.minabs_E == 1
    assert (rec.card_K, rec.card_E, rec.card_KD) == (len(ref.sites), len(ref.edges), len(ref.downcross))
    assert (rec.xi_star, rec.L_star, rec.sbar) == (9, 16, 1)
    assert rec.lemma_ok and not rec.degenerate_KD
    assert rec.lil_edge * math.sqrt(2 * 16 * math.log(math.log(16))) == pytest.approx(rec.maxabs_E)
    assert rec.gamma_ratios[1.0] == pytest.approx(math.log(16) / 4)
    # radius sqrt(16)/log(16)^0.5 = 2.4 covers edge 1, so the gap is zero
    assert rec.gaps[0.5] == 0
    assert rec.gaps[2.0] == 16  # radius < 1: no edge inside


def test_record_long_run_consistency():
    t = WalkTracker(Seed(6, 0)).run(200000)
    rec = record_checkpoint(200000, t.favorites(), t)
    assert rec.minabs_E <= rec.maxabs_E and rec.minabs_K <= rec.maxabs_K
    assert rec.lil_edge * math.sqrt(2 * rec.n * math.log(math.log(rec.n))) == pytest.approx(rec.maxabs_E)
    assert all(v >= 0 and math.isfinite(v) for v in rec.gamma_ratios.values())
    assert rec.lemma_ok
    with pytest.raises(ValueError):
        record_checkpoint(100, t.favorites(), t)


def _rec(n, v):
    class R:
        pass
    r = R()
    r.n, r.lil_edge, r.lil_site_count, r.lil_sbar, r.gamma_ratios = n, v, v, v, {}
    return r


def test_running_extrema():
    ex = RunningExtrema(n_from=16)
    for n, v in ((20, 3.0), (30, 1.0), (40, 2.0)):
        update_running_extrema(ex, _rec(n, v))
    assert ex.min["lil_edge"] == (1.0, 30)
    assert ex.max["lil_edge"] == (3.0, 20)
    before = dict(ex.min), dict(ex.max)
    update_running_extrema(ex, _rec(40, 2.0))
    assert (dict(ex.min), dict(ex.max)) == before
    update_running_extrema(ex, _rec(10, -5.0))  # before the window
    assert ex.min["lil_edge"] == (1.0, 30)


def test_inverse_local_time_small_cases():
    recs = inverse_local_times(Seed(0, 0), [0, 1, 2], budget=10**6)
    assert recs[0].T_r == 0
    assert all(r.complete for r in recs)
    # P(T_1 = 2) = 1/2: of the four 2-step paths exactly +- and -+ return at time 2
    hits = sum(WalkTracker().feed(p).site_count(0) > 1
               for p in ([1, 1], [1, -1], [-1, 1], [-1, -1]))
    assert Fraction(hits, 4) == Fraction(1, 2)
    mc = np.mean([inverse_local_times(Seed(5, i), [1], 10**4)[0].T_r == 2 for i in range(4000)])
    assert abs(mc - 0.5) < 3 * math.sqrt(0.25 / 4000)


def test_inverse_local_time_routes_agree():
    th = [1, 2, 4, 8, 16, 32, 64]
    for i in range(5):
        seed = Seed(11, i)
        fast = inverse_local_times(seed, th, budget=10**7)
        t = WalkTracker(seed)
        slow = inverse_local_time_track(t, th, budget=10**7)
        assert fast == slow
        done = [r.T_r for r in fast if r.complete]
        assert done == sorted(set(done))
        for rec in slow:
            if rec.complete:
                assert WalkTracker(seed).run(rec.T_r).site_count(0) == rec.r + 1
                assert WalkTracker(seed).run(rec.T_r - 1).site_count(0) == rec.r


def test_inverse_local_time_budget_and_validation():
    recs = inverse_local_times(Seed(1, 0), [1, 10**6], budget=1000)
    assert not recs[1].complete and recs[1].T_r is None
    with pytest.raises(ValueError):
        inverse_local_times(Seed(1, 0), [4, 2], budget=10)

import pytest
from hypothesis import given, settings, strategies as st

from favwalk.favorites import (ArgmaxSet, FavoritesState, check_edge_downcross_lemma,
                               extremal_abs, favorite_downcross, favorite_edges,
                               favorite_sites, update_on_step)
from favwalk.oracle import brute_favorites
from favwalk.rng import RecordedPath, Seed
from favwalk.tracker import WalkTracker

from conftest import all_paths


def test_one_up_step():
    fav = WalkTracker().feed([1]).favorites()
    assert favorite_edges(fav) == {1}
    assert favorite_sites(fav) == {0, 1}
    # no downcrossing yet: degenerate, the whole visited range
    assert fav.degenerate and favorite_downcross(fav) == {0, 1}
    assert fav.downcross.max_value == 0


def test_up_down():
    fav = WalkTracker().feed([1, -1]).favorites()
    assert favorite_edges(fav) == {1}
    assert favorite_sites(fav) == {0}
    assert favorite_downcross(fav) == {0}
    assert not fav.degenerate
    assert check_edge_downcross_lemma(fav)


def test_time_zero():
    fav = WalkTracker().favorites()
    assert favorite_sites(fav) == {0} and fav.sites.max_value == 1
    assert favorite_edges(fav) == set()
    with pytest.raises(ValueError):
        check_edge_downcross_lemma(fav)


def test_update_rule():
    a = ArgmaxSet(3, (2, -1))
    assert update_on_step(a, 5, 4) == ArgmaxSet(4, (5,))
    assert update_on_step(a, 7, 3) == ArgmaxSet(3, (-1, 2, 7))
    assert update_on_step(a, 7, 2) is a


def python_reference(steps):
    """Favorites via update_on_step alone, one step at a time."""
    xi, up, down = {0: 1}, {}, {}
    sites, edges, dn = ArgmaxSet(1, (0,)), ArgmaxSet(0, ()), ArgmaxSet(0, ())
    pos = 0
    for s in steps:
        nxt = pos + s
        xi[nxt] = xi.get(nxt, 0) + 1
        sites = update_on_step(sites, nxt, xi[nxt])
        if s > 0:
            up[nxt] = up.get(nxt, 0) + 1
            edge = nxt
        else:
            down[nxt] = down.get(nxt, 0) + 1
            dn = update_on_step(dn, nxt, down[nxt])
            edge = pos
        edges = update_on_step(edges, edge, up.get(edge, 0) + down.get(edge - 1, 0))
        pos = nxt
    return sites, edges, dn


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=400))
def test_kernel_matches_python_update_rule(steps):
    fav = WalkTracker().feed(steps).favorites()
    sites, edges, dn = python_reference(steps)
    assert fav.sites == sites and fav.edges == edges
    if dn.max_value > 0:
        assert fav.downcross == dn


def test_every_prefix_of_every_12_step_path_matches_oracle():
    for path in all_paths(12):
        t = WalkTracker()
        for m in range(1, 13):
            t.feed(path.steps[m - 1:m])
            assert t.favorites() == brute_favorites(path, m)


def test_records_increase_by_one_and_collapse():
    steps = RecordedPath.from_seed(Seed(4, 4), 3000).steps
    t = WalkTracker()
    prev = t.favorites()
    for s in steps:
        t.feed([s])
        cur = t.favorites()
        for a, b in ((prev.sites, cur.sites), (prev.edges, cur.edges)):
            assert b.max_value in (a.max_value, a.max_value + 1)
            if b.max_value > a.max_value:
                assert len(b) == 1
        prev = cur


def test_member_storage_grows_for_long_ties():
    # a straight run ties every visited site at one visit
    t = WalkTracker(member_capacity=1).feed([1] * 300)
    assert favorite_sites(t.favorites()) == set(range(301))
    assert len(favorite_edges(t.favorites())) == 300


def test_extremal_abs():
    assert extremal_abs({1}) == (1, 1)
    assert extremal_abs({-3, 2}) == (2, 3)
    with pytest.raises(ValueError):
        extremal_abs(set())


def test_lemma_on_all_14_step_paths():
    checked = 0
    for path in all_paths(14):
        t = WalkTracker()
        for m in range(1, 15):
            t.feed(path.steps[m - 1:m])
            fav = t.favorites()
            if fav.degenerate:
                continue
            checked += 1
            assert check_edge_downcross_lemma(fav), (path.steps.tolist(), m)
    assert checked > 0


def test_lemma_can_fail_on_a_bad_state():
    bad = FavoritesState(4, ArgmaxSet(2, (0,)), ArgmaxSet(2, (3,)), ArgmaxSet(1, (0,)))
    assert not check_edge_downcross_lemma(bad)


def test_edge_cardinality_tally():
    t = WalkTracker().feed([1, -1, -1, 1])
    # #E(n) for n = 1..4: {1}, {1}, {1, 0}, {0}
    assert t.tally.tolist() == [0, 3, 1, 0, 0]
    assert t.tally.sum() == t.n

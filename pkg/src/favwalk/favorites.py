"""Argmax sets of favorite sites, edges and downcrossing sites."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ArgmaxSet:
    max_value: int
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members


@dataclass(frozen=True)
class FavoritesState:
    """Favorite sites K(n), edges E(n) and downcrossing sites K_D(n).

    Before the walk's first downward step every downcrossing count is zero;
    ``downcross`` then holds the whole visited range with ``max_value`` 0
    and ``degenerate`` is set.
    """

    n: int
    sites: ArgmaxSet
    edges: ArgmaxSet
    downcross: ArgmaxSet
    degenerate: bool = field(default=False)


def update_on_step(aset: ArgmaxSet, index: int, value: int) -> ArgmaxSet:
    """Fold one incremented count into an argmax set (counts never decrease)."""
    if value > aset.max_value:
        return ArgmaxSet(value, (index,))
    if value == aset.max_value:
        return ArgmaxSet(value, aset.members + (index,))
    return aset


def favorite_sites(state: FavoritesState) -> set[int]:
    return set(state.sites.members)


def favorite_edges(state: FavoritesState) -> set[int]:
    return set(state.edges.members)


def favorite_downcross(state: FavoritesState) -> set[int]:
    return set(state.downcross.members)


def extremal_abs(members) -> tuple[int, int]:
    """(min |x|, max |x|) over a nonempty set of lattice points."""
    absvals = [abs(int(x)) for x in members]
    if not absvals:
        raise ValueError("extremal_abs of an empty set")
    return min(absvals), max(absvals)


def check_edge_downcross_lemma(state: FavoritesState) -> bool:
    """True iff x-1 is a favorite downcrossing site for every favorite edge x."""
    if state.n < 1:
        raise ValueError("the edge/downcrossing implication needs n >= 1")
    down = state.downcross
    return all((x - 1) in down for x in state.edges.members)

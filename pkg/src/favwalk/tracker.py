"""Incremental walk tracker: counts and favorite sets in O(1) per step."""
from __future__ import annotations

import numpy as np

from . import _kernel as K
from .favorites import ArgmaxSet, FavoritesState
from .localtime import CountField
from .rng import RecordedPath, Seed

_NO_STEPS = np.empty(0, dtype=np.int8)


class WalkTracker:
    """Owns one walk's local-time field and favorite sets.

    Steps are drawn from the seeded stream by :meth:`run`, or supplied
    explicitly through :meth:`feed` / :meth:`record_step`. Mixing the two
    is allowed; the stream is indexed by absolute time ``n``.

    Parameters
    ----------
    seed : Seed, optional
        Stream to draw from in :meth:`run`.
    capacity : int
        Initial number of lattice cells; storage doubles on demand.
    record_path : bool
        Keep every step taken, for oracle comparison.
    """

    def __init__(self, seed: Seed | None = None, capacity: int = 256,
                 record_path: bool = False, member_capacity: int = 16):
        self.seed = seed
        size = max(int(capacity), 4)
        self._counts = np.zeros((3, size), dtype=np.int64)
        self._offset = size // 2
        self._counts[K.SITE, self._offset] = 1
        self._meta = np.zeros(4, dtype=np.int64)
        self._amax = np.array([1, 0, 0], dtype=np.int64)
        self._members = np.zeros((3, max(int(member_capacity), 1)), dtype=np.int64)
        self._mcount = np.array([1, 0, 0], dtype=np.int64)
        self.tally = np.zeros(5, dtype=np.int64)
        self._recorded = [] if record_path else None
        if seed is not None:
            self._key = seed.key
            self._sid = seed.sid
        else:
            self._key = (np.uint64(0), np.uint64(0))
            self._sid = np.uint64(0)

    @property
    def n(self) -> int:
        return int(self._meta[K.N])

    @property
    def position(self) -> int:
        return int(self._meta[K.POS])

    @property
    def lo(self) -> int:
        return int(self._meta[K.LO])

    @property
    def hi(self) -> int:
        return int(self._meta[K.HI])

    # -- driving -----------------------------------------------------------

    def _grow_counts(self):
        size = self._counts.shape[1]
        new = np.zeros((3, 2 * size), dtype=np.int64)
        shift = size // 2
        new[:, shift:shift + size] = self._counts
        self._counts = new
        self._offset += shift

    def _grow_members(self):
        cap = self._members.shape[1]
        new = np.zeros((3, 2 * cap), dtype=np.int64)
        new[:, :cap] = self._members
        self._members = new

    def _drive(self, n_stop, origin_stop=-1, steps=_NO_STEPS, steps_base=0):
        while True:
            status = K.run_kernel(
                self._counts, self._offset, self._meta, self._amax,
                self._members, self._mcount, self.tally,
                self._key[0], self._key[1], self._sid,
                n_stop, origin_stop, steps, steps_base,
            )
            if status == K.GROW_COUNTS:
                self._grow_counts()
            elif status == K.GROW_MEMBERS:
                self._grow_members()
            else:
                return status

    def run(self, n_target: int) -> "WalkTracker":
        """Advance along the seeded stream until time ``n_target``."""
        if self.seed is None:
            raise ValueError("tracker has no seed; use feed() instead")
        if self._recorded is not None:
            from .rng import StepStream
            return self.feed(StepStream(self.seed).peek(self.n, max(n_target - self.n, 0)))
        self._drive(int(n_target))
        return self

    def run_until_origin_count(self, r: int, budget: int) -> int | None:
        """Advance until xi(0, n) > r; the hitting time, or None past ``budget``."""
        if self.seed is None:
            raise ValueError("tracker has no seed")
        if self.site_count(0) > r:
            return self.n
        status = self._drive(int(budget), origin_stop=int(r))
        return self.n if status == K.ORIGIN_HIT else None

    def feed(self, steps) -> "WalkTracker":
        steps = np.ascontiguousarray(steps, dtype=np.int8)
        if steps.size and not np.all(np.abs(steps) == 1):
            raise ValueError("steps must all be -1 or +1")
        if steps.size == 0:
            return self
        base = self.n
        self._drive(base + steps.shape[0], steps=steps, steps_base=base)
        if self._recorded is not None:
            self._recorded.append(steps.copy())
        return self

    def record_step(self, prev: int, nxt: int) -> "WalkTracker":
        if prev != self.position:
            raise ValueError(f"prev={prev} is not the current position {self.position}")
        if abs(nxt - prev) != 1:
            raise ValueError(f"not a nearest-neighbour move: {prev} -> {nxt}")
        return self.feed(np.array([nxt - prev], dtype=np.int8))

    def recorded_path(self) -> RecordedPath:
        if self._recorded is None:
            raise ValueError("path recording is off")
        if not self._recorded:
            return RecordedPath(np.empty(0, dtype=np.int8))
        return RecordedPath(np.concatenate(self._recorded))

    # -- reading -----------------------------------------------------------

    def _cell(self, row, x):
        j = x + self._offset
        if 0 <= j < self._counts.shape[1]:
            return int(self._counts[row, j])
        return 0

    def site_count(self, x: int) -> int:
        return self._cell(K.SITE, x)

    def upcross_count(self, x: int) -> int:
        return self._cell(K.UP, x)

    def downcross_count(self, x: int) -> int:
        return self._cell(K.DOWN, x)

    def edge_count(self, x: int) -> int:
        return self._cell(K.UP, x) + self._cell(K.DOWN, x - 1)

    def count_field(self) -> CountField:
        a, b = self.lo + self._offset, self.hi + self._offset + 1
        c = self._counts
        return CountField(self.n, self.position, self.lo, self.hi,
                          c[K.SITE, a:b].copy(), c[K.UP, a:b].copy(),
                          c[K.DOWN, a:b].copy())

    def _argmax(self, fam) -> ArgmaxSet:
        k = int(self._mcount[fam])
        return ArgmaxSet(int(self._amax[fam]), tuple(int(v) for v in self._members[fam, :k]))

    def favorites(self) -> FavoritesState:
        down = self._argmax(K.FAM_DOWN)
        degenerate = down.max_value == 0
        if degenerate:
            down = ArgmaxSet(0, tuple(range(self.lo, self.hi + 1)))
        return FavoritesState(self.n, self._argmax(K.FAM_SITES),
                              self._argmax(K.FAM_EDGES), down, degenerate)

    def max_edge_count_within(self, radius: float) -> int:
        """max L(x, n) over edges with |x| <= radius (0 if there are none)."""
        r = int(np.floor(radius))
        lo_e, hi_e = max(-r, self.lo + 1), min(r, self.hi)
        if lo_e > hi_e:
            return 0
        a, b = lo_e + self._offset, hi_e + self._offset + 1
        c = self._counts
        return int((c[K.UP, a:b] + c[K.DOWN, a - 1:b - 1]).max())

    def invariant_failures(self) -> list[str]:
        failed = self.count_field().invariant_failures()
        a, b = self.lo + self._offset, self.hi + self._offset + 1
        outside = np.abs(self._counts[:, :a]).sum() + np.abs(self._counts[:, b:]).sum()
        if outside and "I5_support" not in failed:
            failed.append("I5_support")
        return failed

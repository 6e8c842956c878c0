"""Site, upcrossing and downcrossing counts over the visited range."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INVARIANTS = ("I1_site_total", "I2_edge_total", "I3_site_split",
              "I4_alternation", "I5_support")


@dataclass(frozen=True)
class CountField:
    """Snapshot of local times at time ``n``.

    ``xi``, ``up`` and ``down`` are indexed by ``x - lo`` for x in [lo, hi].
    Edge x is the bond between x-1 and x; L(x, n) = up(x) + down(x-1).
    """

    n: int
    position: int
    lo: int
    hi: int
    xi: np.ndarray
    up: np.ndarray
    down: np.ndarray

    def _get(self, arr: np.ndarray, x: int) -> int:
        if self.lo <= x <= self.hi:
            return int(arr[x - self.lo])
        return 0

    def site_count(self, x: int) -> int:
        return self._get(self.xi, x)

    def upcross_count(self, x: int) -> int:
        return self._get(self.up, x)

    def downcross_count(self, x: int) -> int:
        return self._get(self.down, x)

    def edge_count(self, x: int) -> int:
        return self._get(self.up, x) + self._get(self.down, x - 1)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def edges(self) -> np.ndarray:
        """Edges lo+1..hi, the only ones that can have been crossed."""
        return np.arange(self.lo + 1, self.hi + 1)

    def edge_counts(self) -> np.ndarray:
        """L(x, n) for x in ``edges``."""
        return self.up[1:] + self.down[:-1]

    def invariant_failures(self) -> list[str]:
        """Names of the count-field invariants that do not hold."""
        failed = []
        xi, up, down = self.xi, self.up, self.down
        size = self.hi - self.lo + 1
        if xi.shape != (size,) or up.shape != (size,) or down.shape != (size,):
            return list(INVARIANTS)
        if int(xi.sum()) != self.n + 1:
            failed.append("I1_site_total")
        if int(self.edge_counts().sum()) != self.n:
            failed.append("I2_edge_total")
        origin = np.zeros(size, dtype=np.int64)
        if self.lo <= 0 <= self.hi:
            origin[-self.lo] = 1
        if not np.array_equal(xi, up + down + origin):
            failed.append("I3_site_split")
        edges = self.edges
        diff = up[1:] - down[:-1]
        s = self.position
        expected = np.where(edges >= 1, (s >= edges).astype(np.int64),
                            -(s <= edges - 1).astype(np.int64))
        if not np.array_equal(diff, expected):
            failed.append("I4_alternation")
        if (min(xi.min(initial=0), up.min(initial=0), down.min(initial=0)) < 0
                or not (self.lo <= 0 <= self.hi and self.lo <= s <= self.hi)
                or (size > 0 and (xi[0] == 0 or xi[-1] == 0))):
            failed.append("I5_support")
        return failed

    def equals(self, other: "CountField") -> bool:
        return (self.n == other.n and self.position == other.position
                and self.lo == other.lo and self.hi == other.hi
                and np.array_equal(self.xi, other.xi)
                and np.array_equal(self.up, other.up)
                and np.array_equal(self.down, other.down))

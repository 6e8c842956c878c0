"""Fused numba kernel: one walk step updates counts, argmax sets and tallies.

State layout (all owned by a WalkTracker):
  counts[3, size]   rows SITE, UP, DOWN; cell ``x + offset`` holds lattice x
  meta[4]           n, position, lo, hi
  amax[3]           current maximum of xi, L, xi_D
  members[3, cap]   unsorted maximizing indices, first mcount[f] valid
  tally[5]          number of times n with #E(n) = 0, 1, 2, 3, >=4
"""
import numba as nb
import numpy as np

from .rng import step_bits

SITE, UP, DOWN = 0, 1, 2
FAM_SITES, FAM_EDGES, FAM_DOWN = 0, 1, 2

DONE, GROW_COUNTS, GROW_MEMBERS, ORIGIN_HIT = 0, 1, 2, 3

N, POS, LO, HI = 0, 1, 2, 3

_NEVER = np.int64(1) << 62


@nb.njit(inline="always")
def _offer(amax, members, mcount, fam, index, value):
    m = amax[fam]
    if value > m:
        amax[fam] = value
        members[fam, 0] = index
        mcount[fam] = 1
    elif value == m:
        members[fam, mcount[fam]] = index
        mcount[fam] += 1


@nb.njit(cache=True, nogil=True)
def run_kernel(counts, offset, meta, amax, members, mcount, tally,
               k0, k1, sid, n_stop, origin_stop, steps, steps_base):
    """Advance until time ``n_stop``; returns a status code.

    Steps come from ``steps[t - steps_base]`` when ``steps`` is nonempty,
    otherwise from the Philox stream (k0, k1, sid). Stops early with
    ORIGIN_HIT once xi(0, n) > origin_stop (negative disables this), or
    before a step that would overflow storage.
    """
    size = counts.shape[1]
    cap = members.shape[1]
    use_steps = steps.shape[0] > 0
    n = meta[N]
    pos = meta[POS]
    lo = meta[LO]
    hi = meta[HI]
    b0 = np.uint64(0)
    b1 = np.uint64(0)
    have_block = False
    status = DONE
    while n < n_stop:
        if mcount[0] >= cap or mcount[1] >= cap or mcount[2] >= cap:
            status = GROW_MEMBERS
            break
        if use_steps:
            u = np.int64(steps[n - steps_base] > 0)
        else:
            if (n & 1) == 0 or not have_block:
                b0, b1 = step_bits(np.uint64(n >> 1), sid, k0, k1)
                have_block = True
            u = np.int64(b1 if (n & 1) else b0)
        nxt = pos + 2 * u - 1
        j = nxt + offset
        if j < 1 or j >= size - 1:
            status = GROW_COUNTS
            break
        # branch-free: u = 1 for an up-step, 0 for a down-step
        counts[SITE, j] += 1
        counts[DOWN - u, j] += 1
        e = j + 1 - u  # crossed edge, as a cell index
        _offer(amax, members, mcount, FAM_SITES, nxt, counts[SITE, j])
        _offer(amax, members, mcount, FAM_EDGES, e - offset,
               counts[UP, e] + counts[DOWN, e - 1])
        _offer(amax, members, mcount, FAM_DOWN, nxt,
               counts[DOWN, j] - _NEVER * u)
        lo = min(lo, nxt)
        hi = max(hi, nxt)
        pos = nxt
        n += 1
        c = mcount[FAM_EDGES]
        tally[c if c < 4 else 4] += 1
        if origin_stop >= 0 and nxt == 0 and counts[SITE, j] > origin_stop:
            status = ORIGIN_HIT
            break
    meta[N] = n
    meta[POS] = pos
    meta[LO] = lo
    meta[HI] = hi
    return status


@nb.njit(cache=True, nogil=True)
def origin_passage_kernel(k0, k1, sid, thresholds, budget, out):
    """Position-only walk recording T_r = first n with xi(0, n) > r.

    ``thresholds`` must be strictly increasing; unreached entries of
    ``out`` are left at -1. Returns the number of steps taken.
    """
    m = thresholds.shape[0]
    i = 0
    while i < m and thresholds[i] < 1:
        out[i] = 0
        i += 1
    visits = 1
    pos = 0
    n = 0
    b0 = np.uint64(0)
    b1 = np.uint64(0)
    while i < m and n < budget:
        if (n & 1) == 0:
            b0, b1 = step_bits(np.uint64(n >> 1), sid, k0, k1)
            bit = b0
        else:
            bit = b1
        pos += 1 if bit else -1
        n += 1
        if pos == 0:
            visits += 1
            while i < m and visits > thresholds[i]:
                out[i] = n
                i += 1
    return n

"""Seedable +/-1 step streams backed by a counter-based generator.

Philox4x32-10 is keyed by the 64-bit base seed; the replica index occupies
the upper half of the 128-bit counter, so every stream walks a disjoint
counter range under one key and streams never share generator state.
Each Philox block yields two 64-bit words and each word yields one step
from its top bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S31 = np.uint64(31)

UINT64_MAX = 2**64 - 1


@nb.njit(inline="always")
def philox4x32(c0, c1, c2, c3, k0, k1):
    """Ten-round Philox4x32 on uint64-held 32-bit lanes."""
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        n0 = ((p1 >> _S32) ^ c1 ^ k0) & _MASK
        n1 = p1 & _MASK
        n2 = ((p0 >> _S32) ^ c3 ^ k1) & _MASK
        n3 = p0 & _MASK
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = (k0 + _W0) & _MASK
        k1 = (k1 + _W1) & _MASK
    return c0, c1, c2, c3


@nb.njit(inline="always")
def step_bits(block, sid, k0, k1):
    """Top bits of the two 64-bit output words of one block."""
    x0, x1, x2, x3 = philox4x32(
        block & _MASK, block >> _S32, sid & _MASK, sid >> _S32, k0, k1
    )
    return x0 >> _S31, x2 >> _S31


@nb.njit(cache=True, nogil=True)
def _fill_words(k0, k1, sid, start, out):
    for i in range(out.shape[0]):
        t = np.uint64(start + i)
        x0, x1, x2, x3 = philox4x32(
            (t >> np.uint64(1)) & _MASK, t >> np.uint64(33), sid & _MASK,
            sid >> _S32, k0, k1,
        )
        if t & np.uint64(1):
            out[i] = (x2 << _S32) | x3
        else:
            out[i] = (x0 << _S32) | x1


@nb.njit(cache=True, nogil=True)
def _fill_steps(k0, k1, sid, start, out):
    n = out.shape[0]
    i = 0
    while i < n:
        t = start + i
        b0, b1 = step_bits(np.uint64(t >> 1), sid, k0, k1)
        bit = b1 if t & 1 else b0
        out[i] = 1 if bit else -1
        i += 1


@dataclass(frozen=True)
class Seed:
    base_seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.base_seed <= UINT64_MAX:
            raise ValueError(f"base_seed must fit in 64 bits, got {self.base_seed}")
        if not 0 <= self.stream_id <= UINT64_MAX:
            raise ValueError(f"stream_id must fit in 64 bits, got {self.stream_id}")

    @property
    def key(self) -> tuple[np.uint64, np.uint64]:
        return np.uint64(self.base_seed & 0xFFFFFFFF), np.uint64(self.base_seed >> 32)

    @property
    def sid(self) -> np.uint64:
        return np.uint64(self.stream_id)


class StepStream:
    """Infinite, random-access sequence of +/-1 steps for one Seed.

    Step ``t`` (0-based, the move from time t to t+1) is a pure function of
    ``(seed, t)``, so a stream can be re-read or resumed anywhere.
    """

    def __init__(self, seed: Seed):
        self.seed = seed
        self.position = 0

    def next_step(self) -> int:
        out = np.empty(1, dtype=np.int8)
        k0, k1 = self.seed.key
        _fill_steps(k0, k1, self.seed.sid, self.position, out)
        self.position += 1
        return int(out[0])

    def read(self, count: int) -> np.ndarray:
        """Next ``count`` steps as an int8 array; advances the stream."""
        out = self.peek(self.position, count)
        self.position += count
        return out

    def peek(self, start: int, count: int) -> np.ndarray:
        if start < 0 or count < 0:
            raise ValueError("start and count must be nonnegative")
        out = np.empty(count, dtype=np.int8)
        k0, k1 = self.seed.key
        _fill_steps(k0, k1, self.seed.sid, start, out)
        return out

    def words(self, start: int, count: int) -> np.ndarray:
        """Raw 64-bit generator words; step t is +1 iff word t has its top bit set."""
        out = np.empty(count, dtype=np.uint64)
        k0, k1 = self.seed.key
        _fill_words(k0, k1, self.seed.sid, start, out)
        return out


def new_stream(seed: Seed) -> StepStream:
    return StepStream(seed)


def next_step(stream: StepStream) -> int:
    return stream.next_step()


@dataclass(frozen=True)
class WalkState:
    n: int = 0
    position: int = 0


def advance(walk: WalkState, step: int) -> WalkState:
    if step not in (-1, 1):
        raise ValueError(f"step must be -1 or +1, got {step}")
    return WalkState(walk.n + 1, walk.position + step)


@dataclass(frozen=True)
class RecordedPath:
    steps: np.ndarray

    def __post_init__(self):
        steps = np.asarray(self.steps, dtype=np.int8)
        if steps.ndim != 1 or not np.all(np.abs(steps) == 1):
            raise ValueError("a path is a 1-d sequence of +/-1 steps")
        object.__setattr__(self, "steps", steps)

    @property
    def length(self) -> int:
        return int(self.steps.shape[0])

    def positions(self) -> np.ndarray:
        """S_0..S_n, with S_0 = 0."""
        out = np.zeros(self.length + 1, dtype=np.int64)
        np.cumsum(self.steps, out=out[1:])
        return out

    @classmethod
    def from_seed(cls, seed: Seed, length: int) -> "RecordedPath":
        return cls(StepStream(seed).peek(0, length))

    @classmethod
    def from_index(cls, index: int, length: int) -> "RecordedPath":
        """Path whose step k is +1 iff bit k of ``index`` is set."""
        bits = (index >> np.arange(length, dtype=np.int64)) & 1
        return cls((2 * bits - 1).astype(np.int8))

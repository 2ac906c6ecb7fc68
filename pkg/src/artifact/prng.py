"""Seeded pixel traversal.

The generator is xoshiro256** whose four state words are the first four
SplitMix64 outputs for the 64-bit key. A permutation of ``0..n-1`` is the
Fisher-Yates shuffle of the identity, walking ``i`` from ``n-1`` down to 1
and swapping ``i`` with ``j = bounded(i + 1)``. ``bounded(s)`` is Lemire's
multiply-shift on the high 32 bits of one generator output, with the usual
rejection of the low-product values below ``(2**32 - s) % s``.

Everything is pinned so independent implementations produce the same
traversal. A numba kernel is used when available; the pure-Python path is
the reference and the two are tested against each other.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

MASK64 = (1 << 64) - 1
MAX_N = 1 << 32

try:  # pragma: no cover - exercised indirectly
    import numba
except ImportError:  # pragma: no cover
    numba = None


def splitmix64_state(seed: int) -> list[int]:
    z = seed & MASK64
    out = []
    for _ in range(4):
        z = (z + 0x9E3779B97F4A7C15) & MASK64
        x = z
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
        out.append(x ^ (x >> 31))
    return out


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """Reference xoshiro256** generator."""

    def __init__(self, seed: int = 0, state=None):
        self.s = list(state) if state is not None else splitmix64_state(seed)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def bounded(self, s: int) -> int:
        m = (self.next_u64() >> 32) * s
        low = m & 0xFFFFFFFF
        if low < s:
            threshold = ((1 << 32) - s) % s
            while low < threshold:
                m = (self.next_u64() >> 32) * s
                low = m & 0xFFFFFFFF
        return m >> 32

    def shuffle_identity(self, n: int) -> np.ndarray:
        a = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.bounded(i + 1)
            a[i], a[j] = a[j], a[i]
        return np.array(a, dtype=np.int64)

    def bits(self, n: int) -> np.ndarray:
        """One bit per draw, taken from the top of each output."""
        return np.array([self.next_u64() >> 63 for _ in range(n)], dtype=np.uint8)


if numba is not None:

    @numba.njit(cache=True)
    def _next(s):  # pragma: no cover - compiled
        s1 = s[1]
        x = s1 * np.uint64(5)
        result = ((x << np.uint64(7)) | (x >> np.uint64(57))) * np.uint64(9)
        t = s1 << np.uint64(17)
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = (s[3] << np.uint64(45)) | (s[3] >> np.uint64(19))
        return result

    @numba.njit(cache=True)
    def _shuffle_kernel(s, n):  # pragma: no cover - compiled
        a = np.arange(n)
        low_mask = np.uint64(0xFFFFFFFF)
        for i in range(n - 1, 0, -1):
            bound = np.uint64(i + 1)
            m = (_next(s) >> np.uint64(32)) * bound
            low = m & low_mask
            if low < bound:
                threshold = (np.uint64(0x100000000) - bound) % bound
                while low < threshold:
                    m = (_next(s) >> np.uint64(32)) * bound
                    low = m & low_mask
            j = np.int64(m >> np.uint64(32))
            tmp = a[i]
            a[i] = a[j]
            a[j] = tmp
        return a

    @numba.njit(cache=True)
    def _bits_kernel(s, n):  # pragma: no cover - compiled
        out = np.empty(n, dtype=np.uint8)
        for k in range(n):
            out[k] = np.uint8(_next(s) >> np.uint64(63))
        return out


class Generator:
    """Seeded stream that hands out a permutation and then auxiliary bits.

    Uses the compiled kernels when numba is importable, otherwise the
    reference generator.
    """

    def __init__(self, seed: int = 0, fast: bool | None = None, state=None):
        self.fast = (numba is not None) if fast is None else (fast and numba is not None)
        if state is None:
            state = splitmix64_state(seed)
        if self.fast:
            self._state = np.array(state, dtype=np.uint64)
        else:
            self._ref = Xoshiro256(state=state)

    def permutation(self, n: int) -> np.ndarray:
        if not 0 <= n <= MAX_N:
            raise ValueError(f"permutation length {n} out of range")
        if self.fast:
            return _shuffle_kernel(self._state, n)
        return self._ref.shuffle_identity(n)

    def bits(self, n: int) -> np.ndarray:
        if self.fast:
            return _bits_kernel(self._state, n)
        return self._ref.bits(n)

    @property
    def state(self) -> tuple:
        if self.fast:
            return tuple(int(w) for w in self._state)
        return tuple(self._ref.s)


@lru_cache(maxsize=32)
def _cached_permutation(seed: int, n: int):
    gen = Generator(seed)
    perm = gen.permutation(n)
    perm.setflags(write=False)
    return perm, gen.state


def permutation(seed: int, n: int) -> np.ndarray:
    """Seeded permutation of ``0..n-1`` (read-only, cached)."""
    return _cached_permutation(int(seed) & MASK64, int(n))[0]


def permutation_and_bits(seed: int, n: int, n_bits: int):
    """The permutation plus ``n_bits`` further draws from the same generator."""
    perm, state = _cached_permutation(int(seed) & MASK64, int(n))
    return perm, Generator(state=state).bits(n_bits)


def pixel_order(seed: int, n_pixels: int) -> np.ndarray:
    """Traversal of ``0..n_pixels-2``; the last raster pixel carries the indicator."""
    if n_pixels < 2:
        raise ValueError("need at least two pixels")
    return permutation(seed, n_pixels - 1)

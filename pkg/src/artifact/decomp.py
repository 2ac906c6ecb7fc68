"""Pixel-value decomposition schemes.

A scheme is a positional number system given by its defining sequence
(position 0 = least significant). Canonical codewords are produced greedily,
taking sequence elements in descending value order; for the Fibonacci
sequence this is exactly the Zeckendorf representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NonCanonicalCode
from .image import GrayImage, histogram


@dataclass(frozen=True)
class Scheme:
    name: str
    sequence: tuple

    def __post_init__(self):
        if len(set(self.sequence)) != len(self.sequence):
            raise ValueError("defining sequence has repeated elements")
        bad = [v for v in range(256) if self._greedy(v) is None]
        if bad:
            raise ValueError(f"{self.name} cannot represent {bad[:5]}")

    def _greedy(self, v: int):
        bits = [0] * len(self.sequence)
        for pos in sorted(range(len(self.sequence)), key=lambda i: -self.sequence[i]):
            if self.sequence[pos] <= v:
                bits[pos] = 1
                v -= self.sequence[pos]
        return None if v else tuple(bits)

    @property
    def length(self) -> int:
        return len(self.sequence)

    @cached_property
    def table(self) -> np.ndarray:
        """(256, length) array; row v is the canonical codeword of v, position-indexed."""
        rows = [self._greedy(v) for v in range(256)]
        arr = np.array(rows, dtype=np.uint8)
        arr.setflags(write=False)
        return arr

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array(self.sequence, dtype=np.int64)

    @cached_property
    def lsb_table(self) -> np.ndarray:
        t = self.table[:, 0].copy()
        t.setflags(write=False)
        return t

    @cached_property
    def low3_table(self) -> np.ndarray:
        """Low three positions of each canonical code packed as an int (pos2 pos1 pos0)."""
        t = self.table
        packed = (t[:, 2].astype(np.int64) << 2) | (t[:, 1] << 1) | t[:, 0]
        packed.setflags(write=False)
        return packed

    def __hash__(self):
        return hash((self.name, self.sequence))


def binary() -> Scheme:
    return Scheme("binary", tuple(1 << n for n in range(8)))


def extended_binary(x: int = 3) -> Scheme:
    if x % 2 == 0 or not 3 <= x <= 255:
        raise ValueError("extension element must be an odd integer in [3, 255]")
    return Scheme(f"extended-binary-{x}", tuple(sorted({x} | {1 << n for n in range(8)})))


def fibonacci() -> Scheme:
    seq = [1, 2]
    while seq[-1] + seq[-2] <= 255:
        seq.append(seq[-1] + seq[-2])
    return Scheme("fibonacci", tuple(seq))


def lucas() -> Scheme:
    # the value-2 element sits in the least significant position
    seq = [2, 1]
    while seq[-1] + seq[-2] <= 255:
        seq.append(seq[-1] + seq[-2])
    return Scheme("lucas", tuple(seq))


BINARY = binary()
EXTENDED_BINARY = extended_binary(3)
FIBONACCI = fibonacci()
LUCAS = lucas()
# the five prime-extended variants compared against x=3
EXTENDED_VARIANTS = {f"S{i}": extended_binary(x) for i, x in enumerate((5, 11, 23, 47, 97), 1)}


@dataclass(frozen=True)
class Codeword:
    scheme: Scheme
    bits: tuple = field()

    def __str__(self):
        # most significant position first, the way codes are printed
        return "".join(str(b) for b in reversed(self.bits))

    @property
    def value(self) -> int:
        return int(sum(b * s for b, s in zip(self.bits, self.scheme.sequence)))


def decompose(scheme: Scheme, v: int) -> Codeword:
    if not 0 <= v <= 255:
        raise ValueError(f"intensity {v} outside [0, 255]")
    return Codeword(scheme, tuple(int(b) for b in scheme.table[v]))


def compose(codeword: Codeword) -> int:
    bits = tuple(codeword.bits)
    if len(bits) != codeword.scheme.length or any(b not in (0, 1) for b in bits):
        raise NonCanonicalCode(f"malformed codeword {bits}")
    v = codeword.value
    if v > 255 or tuple(codeword.scheme.table[v]) != bits:
        raise NonCanonicalCode(f"{codeword} is not canonical under {codeword.scheme.name}")
    return v


def codeword_from_string(scheme: Scheme, text: str) -> Codeword:
    """Parse an MSB-first 0/1 string."""
    return Codeword(scheme, tuple(int(c) for c in reversed(text)))


def scheme_lsb(scheme: Scheme, v: int) -> int:
    return int(scheme.lsb_table[v])


def zero_lsb_ratio(scheme: Scheme, img) -> float:
    pixels = img.pixels if isinstance(img, GrayImage) else np.asarray(img)
    return float(np.mean(scheme.lsb_table[pixels] == 0))


def extended_binary_gain(img: GrayImage) -> float:
    """Increase in the 0-LSB ratio of x=3 Extended-Binary over plain binary.

    Equals the share of pixels congruent to 3 mod 4.
    """
    h = histogram(img)
    return float(h[3::4].sum()) / img.size


def partition_sets(scheme: Scheme) -> dict:
    """A_ij: intensities whose binary LSB is i and whose scheme LSB is j."""
    sets = {key: set() for key in ("A00", "A01", "A10", "A11")}
    for v in range(256):
        sets[f"A{v & 1}{scheme.lsb_table[v]}"].add(v)
    return sets

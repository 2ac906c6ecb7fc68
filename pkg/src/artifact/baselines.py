"""Reference LSB schemes: replacement, matching, and matching revisited.

All three visit pixels in the seeded order of :func:`artifact.prng.permutation`
over the whole raster. Any further random choice (the +-1 direction of LSB
matching) is drawn from the same generator after the permutation, one draw
per embedded bit or pair, so a single seed governs everything.
"""
from __future__ import annotations

import numpy as np

from .errors import CapacityExceeded
from .image import GrayImage
from .prng import permutation_and_bits as _order_and_bits


def _as_bits(payload) -> np.ndarray:
    bits = np.asarray(getattr(payload, "bits", payload), dtype=np.int64).ravel()
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValueError("payload must be a 0/1 sequence")
    return bits


def lsbr_embed(cover: GrayImage, payload, seed: int) -> GrayImage:
    bits = _as_bits(payload)
    if bits.size > cover.size:
        raise CapacityExceeded(bits.size, cover.size)
    perm, _ = _order_and_bits(seed, cover.size, 0)
    flat = cover.pixels.ravel().astype(np.int64)
    idx = perm[:bits.size]
    flat[idx] = (flat[idx] & ~1) | bits
    return GrayImage(flat.reshape(cover.shape))


def lsbr_extract(stego: GrayImage, n_bits: int, seed: int) -> np.ndarray:
    if n_bits > stego.size:
        raise CapacityExceeded(n_bits, stego.size)
    perm, _ = _order_and_bits(seed, stego.size, 0)
    return (stego.pixels.ravel()[perm[:n_bits]] & 1).astype(np.uint8)


def lsbm_embed(cover: GrayImage, payload, seed: int) -> GrayImage:
    """LSB matching: a mismatching pixel moves by +-1 at random (never past 0 or 255)."""
    bits = _as_bits(payload)
    if bits.size > cover.size:
        raise CapacityExceeded(bits.size, cover.size)
    perm, coins = _order_and_bits(seed, cover.size, bits.size)
    flat = cover.pixels.ravel().astype(np.int64)
    idx = perm[:bits.size]
    vals = flat[idx]
    step = np.where(coins == 1, 1, -1)
    step[vals == 0] = 1
    step[vals == 255] = -1
    flat[idx] = vals + np.where((vals & 1) != bits, step, 0)
    return GrayImage(flat.reshape(cover.shape))


lsbm_extract = lsbr_extract


def _usable(values: np.ndarray) -> np.ndarray:
    return (values > 0) & (values < 255)


def lsbmr_capacity(cover: GrayImage) -> int:
    """Embeddable bits: two per pair of non-saturated pixels."""
    n = int(np.count_nonzero(_usable(cover.pixels)))
    return n - n % 2


def lsbmr_embed(cover: GrayImage, payload, seed: int) -> GrayImage:
    """LSB matching revisited on consecutive non-saturated pixels of the traversal.

    For a pair (x1, x2) carrying (m1, m2) the receiver reads
    ``m1 = LSB(x1)`` and ``m2 = LSB(x1 // 2 + x2)``; at most one pixel
    changes by 1 except at the edges of the usable range [1, 254], where
    a forced direction may move both.
    """
    bits = _as_bits(payload)
    if bits.size % 2:
        raise ValueError("LSBMR payload length must be even")
    available = lsbmr_capacity(cover)
    if bits.size > available:
        raise CapacityExceeded(bits.size, available)
    n_pairs = bits.size // 2
    perm, coins = _order_and_bits(seed, cover.size, n_pairs)
    flat = cover.pixels.ravel().astype(np.int64)
    order = perm[_usable(flat[perm])][:bits.size]
    i1, i2 = order[0::2], order[1::2]
    x1, x2 = flat[i1], flat[i2]
    m1, m2 = bits[0::2], bits[1::2]

    def f(a, b):
        return ((a >> 1) + b) & 1

    # direction for x2 when only it needs to move
    step2 = np.where(coins == 1, 1, -1)
    step2[x2 == 1] = 1
    step2[x2 == 254] = -1

    new1, new2 = x1.copy(), x2.copy()
    same = (x1 & 1) == m1
    fix2 = same & (f(x1, x2) != m2)
    new2[fix2] = x2[fix2] + step2[fix2]

    diff = ~same
    down = diff & (f(x1 - 1, x2) == m2)
    new1[down] = x1[down] - 1
    up = diff & ~down
    new1[up] = x1[up] + 1
    # keep x1 inside [1, 254]; take the other direction and repair m2 via x2
    low = diff & (new1 == 0)
    high = diff & (new1 == 255)
    new1[low] = 2
    new1[high] = 253
    edge = low | high
    repair = edge & (f(new1, x2) != m2)
    new2[repair] = x2[repair] + step2[repair]

    flat[i1], flat[i2] = new1, new2
    return GrayImage(flat.reshape(cover.shape))


def lsbmr_extract(stego: GrayImage, n_bits: int, seed: int) -> np.ndarray:
    if n_bits % 2:
        raise ValueError("LSBMR payload length must be even")
    flat = stego.pixels.ravel().astype(np.int64)
    perm, _ = _order_and_bits(seed, stego.size, 0)
    order = perm[_usable(flat[perm])]
    if order.size < n_bits:
        raise CapacityExceeded(n_bits, order.size - order.size % 2)
    order = order[:n_bits]
    x1, x2 = flat[order[0::2]], flat[order[1::2]]
    out = np.empty(n_bits, dtype=np.uint8)
    out[0::2] = x1 & 1
    out[1::2] = ((x1 >> 1) + x2) & 1
    return out


EMBEDDERS = {"lsbr": lsbr_embed, "lsbm": lsbm_embed, "lsbmr": lsbmr_embed}
EXTRACTORS = {"lsbr": lsbr_extract, "lsbm": lsbm_extract, "lsbmr": lsbmr_extract}


def capacity_bits(method: str, cover: GrayImage) -> int:
    return lsbmr_capacity(cover) if method == "lsbmr" else cover.size

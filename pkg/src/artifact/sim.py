"""Secret image manipulation (SIM).

Pixel values are re-labelled by frequency rank: the most frequent value gets
the byte with the fewest 1 bits, and so on down the popcount-ordered
codebook. The mapping is stored as side-information so the relabelling is
lossless.

Side-information layout (MSB-first)::

    n_values   9 bits   number of distinct pixel values (1..256)
    values     8 bits each, original values in rank order
"""
from __future__ import annotations

import numpy as np

from .bitstream import BitStream, zero_ratio
from .errors import CorruptStream
from .image import GrayImage

COUNT_BITS = 9
VALUE_BITS = 8
MAX_SIDE_INFO = COUNT_BITS + 256 * VALUE_BITS  # 2057


def popcount_codebook(width: int) -> np.ndarray:
    """All ``width``-bit values grouped by popcount, ascending within a group."""
    values = np.arange(1 << width)
    pop = np.array([bin(v).count("1") for v in values])
    order = np.lexsort((values, pop))
    out = values[order].astype(np.int64)
    out.setflags(write=False)
    return out


CODEBOOK = popcount_codebook(8)
_CODE_RANK = np.argsort(CODEBOOK)


def rank_values(values: np.ndarray) -> np.ndarray:
    """Distinct values ordered by descending count, ties by ascending value."""
    uniq, counts = np.unique(values, return_counts=True)
    return uniq[np.lexsort((uniq, -counts))]


def _raster(secret) -> np.ndarray:
    pixels = secret.pixels if isinstance(secret, GrayImage) else np.asarray(secret)
    return pixels.ravel().astype(np.int64)


def sim_forward(secret) -> tuple[BitStream, BitStream]:
    """Return ``(side_info, payload)``; payload holds one 8-bit code per pixel.

    ``secret`` is an image or any array of 8-bit values (the wavelet coder
    passes its LL band, which may have odd dimensions).
    """
    pixels = _raster(secret)
    if pixels.size == 0 or pixels.min() < 0 or pixels.max() > 255:
        raise ValueError("SIM input must be a nonempty array of values in [0, 255]")
    ranking = rank_values(pixels)
    lut = np.zeros(256, dtype=np.int64)
    lut[ranking] = CODEBOOK[:ranking.size]
    side = BitStream()
    side.write_field(ranking.size, COUNT_BITS)
    side.write_codes(ranking, VALUE_BITS)
    payload = BitStream().write_codes(lut[pixels], VALUE_BITS)
    return side, payload


def read_side_info(stream: BitStream) -> np.ndarray:
    n = stream.read_field(COUNT_BITS)
    if n == 0 or n > 256:
        raise CorruptStream(f"SIM side-information declares {n} values")
    values = stream.read_codes(n, VALUE_BITS)
    if np.unique(values).size != n:
        raise CorruptStream("SIM side-information lists a value twice")
    return values


def decode_ranked(codes: np.ndarray, originals: np.ndarray, code_rank: np.ndarray,
                  what: str) -> np.ndarray:
    """Map substituted codes back to originals by histogram rank.

    Codes are ranked by descending frequency with ties broken by their
    position in the codebook; the code of rank i stands for ``originals[i]``.
    A valid stream uses exactly the first ``len(originals)`` codebook
    entries, which is checked here.
    """
    uniq, counts = np.unique(codes, return_counts=True)
    if uniq.size != originals.size:
        raise CorruptStream(
            f"{what}: {uniq.size} distinct codes but side-information lists {originals.size}"
        )
    ranks = code_rank[uniq]
    order = np.lexsort((ranks, -counts))
    if not np.array_equal(ranks[order], np.arange(uniq.size)):
        raise CorruptStream(f"{what}: code frequencies disagree with the side-information order")
    lut = np.zeros(code_rank.size, dtype=np.int64)
    lut[uniq[order]] = originals
    return lut[codes]


def sim_decode_values(stream: BitStream, count: int) -> np.ndarray:
    """Read side-information then ``count`` codes; returns the original values."""
    originals = read_side_info(stream)
    codes = stream.read_codes(count, VALUE_BITS)
    return decode_ranked(codes, originals, _CODE_RANK, "SIM")


def sim_decode(stream: BitStream, height: int, width: int) -> GrayImage:
    """Read side-information then ``height*width`` codes from ``stream``."""
    return GrayImage(sim_decode_values(stream, height * width).reshape(height, width))


def sim_inverse(side_info: BitStream, payload: BitStream, height: int, width: int) -> GrayImage:
    if len(payload) != VALUE_BITS * height * width:
        raise CorruptStream(
            f"payload has {len(payload)} bits, expected {VALUE_BITS * height * width}"
        )
    joined = BitStream(side_info.bits).write_bits(payload.bits)
    img = sim_decode(joined, height, width)
    if joined.remaining:
        raise CorruptStream(f"{joined.remaining} trailing bits after SIM side-information")
    return img


def sim_stream(secret: GrayImage) -> BitStream:
    side, payload = sim_forward(secret)
    return side.extend(payload)


def sim_zero_gain(img) -> tuple[float, float]:
    """Zero ratio of the raw 8-bit stream and of the SIM payload (no side-info)."""
    raw = BitStream().write_codes(_raster(img), VALUE_BITS)
    _, payload = sim_forward(img)
    return zero_ratio(raw), zero_ratio(payload)

"""Integer-wavelet SIM (IWSIM).

The secret is split by a level-1 integer Haar transform. LL is coded by SIM;
each detail band is shifted to be nonnegative, frequency-ranked and
substituted with the popcount-ordered codes of the band's code width.

Stream layout, bands in the order LL, LH, HL, HH::

    LL    SIM side-information, then 8-bit codes
    band  format flag       1 bit   (0 = SI1, 1 = SI2)
          min coefficient  11 bits  two's complement
          width indicator   SI1: 2 bits (00/01/10 -> 8/9/10)
                            SI2: 1 bit  (0/1 -> 9/10)
          value count C     SI1: 9 bits, SI2: 10 bits
          value list        C fields of code-width bits (shifted values, rank order)
          coefficients      one code-width code per coefficient, row-major

SI1 is used when C <= 256, SI2 otherwise.
"""
from __future__ import annotations

import numpy as np

from . import sim
from .bitstream import BitStream, zero_ratio
from .errors import CorruptStream
from .image import GrayImage
from .iwt import BAND_RANGE, SubBands, haar_forward, haar_inverse

MIN_BITS = 11
SI1, SI2 = 0, 1
SI1_WIDTHS = {8: 0, 9: 1, 10: 2}
SI2_WIDTHS = {9: 0, 10: 1}
SI1_MAX_VALUES = 256

WIDE_CODEBOOKS = {b: sim.popcount_codebook(b) for b in (8, 9, 10)}
_WIDE_RANKS = {b: np.argsort(cb) for b, cb in WIDE_CODEBOOKS.items()}


def side_info_bits(n_values: int, width: int) -> int:
    fmt = SI1 if n_values <= SI1_MAX_VALUES else SI2
    header = 1 + MIN_BITS + (2 + 9 if fmt == SI1 else 1 + 10)
    return header + n_values * width


def band_parts(band: np.ndarray) -> tuple[BitStream, BitStream]:
    """Side-information and codes of one detail band."""
    coeffs = band.ravel().astype(np.int64)
    m = int(coeffs.min())
    shifted = coeffs - m
    width = max(8, int(shifted.max()).bit_length())
    ranking = sim.rank_values(shifted)
    c = ranking.size
    side = BitStream()
    if c <= SI1_MAX_VALUES:
        side.write_field(SI1, 1)
        side.write_signed(m, MIN_BITS)
        side.write_field(SI1_WIDTHS[width], 2)
        side.write_field(c, 9)
    else:
        side.write_field(SI2, 1)
        side.write_signed(m, MIN_BITS)
        side.write_field(SI2_WIDTHS[width], 1)
        side.write_field(c, 10)
    side.write_codes(ranking, width)
    lut = np.zeros(1 << width, dtype=np.int64)
    lut[ranking] = WIDE_CODEBOOKS[width][:c]
    return side, BitStream().write_codes(lut[shifted], width)


def encode_band(band: np.ndarray, stream: BitStream) -> int:
    """Append one detail band; returns the number of side-information bits."""
    side, codes = band_parts(band)
    stream.extend(side).extend(codes)
    return len(side)


def decode_band(stream: BitStream, shape, name: str) -> np.ndarray:
    fmt = stream.read_field(1)
    m = stream.read_signed(MIN_BITS)
    if fmt == SI1:
        widths = {v: k for k, v in SI1_WIDTHS.items()}
        indicator = stream.read_field(2)
        c = stream.read_field(9)
        if indicator not in widths:
            raise CorruptStream(f"{name}: invalid SI1 width indicator {indicator:02b}")
        if not 1 <= c <= SI1_MAX_VALUES:
            raise CorruptStream(f"{name}: SI1 value count {c} out of range")
    else:
        widths = {v: k for k, v in SI2_WIDTHS.items()}
        indicator = stream.read_field(1)
        c = stream.read_field(10)
        if c <= SI1_MAX_VALUES:
            raise CorruptStream(f"{name}: SI2 used for only {c} values")
    width = widths[indicator]
    if c > (1 << width):
        raise CorruptStream(f"{name}: {c} values cannot be coded in {width} bits")
    values = stream.read_codes(c, width)
    if np.unique(values).size != c:
        raise CorruptStream(f"{name}: value list has duplicates")
    n = shape[0] * shape[1]
    codes = stream.read_codes(n, width)
    shifted = sim.decode_ranked(codes, values, _WIDE_RANKS[width], name)
    coeffs = shifted + m
    lo, hi = BAND_RANGE[name]
    if coeffs.min() < lo or coeffs.max() > hi:
        raise CorruptStream(f"{name}: coefficient outside [{lo}, {hi}]")
    return coeffs.reshape(shape)


def iwsim_parts(secret: GrayImage) -> list[tuple[BitStream, BitStream]]:
    """(side-information, codes) for LL, LH, HL and HH in stream order."""
    bands = haar_forward(secret)
    parts = [sim.sim_forward(bands.ll)]
    parts += [band_parts(getattr(bands, name)) for name in ("lh", "hl", "hh")]
    return parts


def iwsim_encode(secret: GrayImage) -> tuple[BitStream, int]:
    """Return the full stream and its side-information bit count."""
    stream = BitStream()
    overhead = 0
    for side, codes in iwsim_parts(secret):
        stream.extend(side).extend(codes)
        overhead += len(side)
    return stream, overhead


def iwsim_forward(secret: GrayImage) -> BitStream:
    return iwsim_encode(secret)[0]


def iwsim_decode(stream: BitStream, height: int, width: int) -> GrayImage:
    """Parse one IWSIM block from the cursor; trailing bits are left unread."""
    if height % 2 or width % 2:
        raise CorruptStream(f"IWSIM needs even dimensions, got {height}x{width}")
    shape = (height // 2, width // 2)
    ll = sim.sim_decode_values(stream, shape[0] * shape[1]).reshape(shape)
    details = {name: decode_band(stream, shape, name) for name in ("lh", "hl", "hh")}
    return haar_inverse(SubBands(ll=ll, **details))


def iwsim_inverse(stream: BitStream, height: int, width: int) -> GrayImage:
    """Decode a complete standalone stream; trailing bits are an error."""
    reader = BitStream(stream.bits)
    img = iwsim_decode(reader, height, width)
    if reader.remaining:
        raise CorruptStream(f"{reader.remaining} trailing bits after IWSIM stream")
    return img


def iwsim_overhead(secret: GrayImage) -> int:
    return iwsim_encode(secret)[1]


def iwsim_zero_gain(img: GrayImage) -> tuple[float, float]:
    """Zero ratio of the raw 8-bit stream and of the IWSIM codes (no side-info)."""
    raw = BitStream().write_codes(img.pixels.ravel(), sim.VALUE_BITS)
    codes = np.concatenate([c.bits for _, c in iwsim_parts(img)])
    return zero_ratio(raw), zero_ratio(codes)

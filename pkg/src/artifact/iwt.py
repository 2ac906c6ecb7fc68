"""Level-1 two-dimensional integer Haar transform (S-transform lifting).

Forward, per axis: ``low = floor((a + b) / 2)``, ``high = a - b``.
Horizontal pairs are lifted first, then vertical pairs of each half.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CorruptBands, OddDimension
from .image import GrayImage

BAND_NAMES = ("ll", "lh", "hl", "hh")
# inclusive coefficient ranges for 8-bit input
BAND_RANGE = {"ll": (0, 255), "lh": (-255, 255), "hl": (-255, 255), "hh": (-510, 510)}


@dataclass(frozen=True, eq=False)
class SubBands:
    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    @property
    def source_shape(self):
        h, w = self.ll.shape
        return 2 * h, 2 * w

    def bands(self):
        return [(name, getattr(self, name)) for name in BAND_NAMES]

    def __eq__(self, other):
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in BAND_NAMES)


def _lift(a, b):
    return (a + b) >> 1, a - b


def _unlift(low, high):
    a = low + ((high + 1) >> 1)
    return a, a - high


def haar_forward(img) -> SubBands:
    x = (img.pixels if isinstance(img, GrayImage) else np.asarray(img)).astype(np.int64)
    h, w = x.shape
    if h % 2 or w % 2:
        raise OddDimension(f"wavelet needs even dimensions, got {h}x{w}")
    row_low, row_high = _lift(x[:, 0::2], x[:, 1::2])
    ll, hl = _lift(row_low[0::2], row_low[1::2])
    lh, hh = _lift(row_high[0::2], row_high[1::2])
    return SubBands(ll=ll, lh=lh, hl=hl, hh=hh)


def haar_inverse(bands: SubBands) -> GrayImage:
    shapes = {getattr(bands, n).shape for n in BAND_NAMES}
    if len(shapes) != 1:
        raise CorruptBands(f"inconsistent band shapes {sorted(shapes)}")
    hh_, hw = bands.ll.shape
    row_low = np.empty((2 * hh_, hw), dtype=np.int64)
    row_high = np.empty_like(row_low)
    row_low[0::2], row_low[1::2] = _unlift(bands.ll.astype(np.int64), bands.hl.astype(np.int64))
    row_high[0::2], row_high[1::2] = _unlift(bands.lh.astype(np.int64), bands.hh.astype(np.int64))
    x = np.empty((2 * hh_, 2 * hw), dtype=np.int64)
    x[:, 0::2], x[:, 1::2] = _unlift(row_low, row_high)
    if x.min() < 0 or x.max() > 255:
        raise CorruptBands("reconstructed intensities fall outside [0, 255]")
    return GrayImage(x.astype(np.uint8))

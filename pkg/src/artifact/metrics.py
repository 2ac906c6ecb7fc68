"""Embedding efficiency, PSNR, capacity and the change-probability model."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import baselines, sim, stego
from .image import GrayImage
from .iwsim import MIN_BITS, SI1_MAX_VALUES
from .iwt import BAND_RANGE

INF = math.inf


def _check_shapes(a: GrayImage, b: GrayImage):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def modified_pixels(cover: GrayImage, stego_img: GrayImage) -> int:
    _check_shapes(cover, stego_img)
    return int(np.count_nonzero(cover.pixels != stego_img.pixels))


def embedding_efficiency(cover: GrayImage, stego_img: GrayImage, payload_bits: int) -> float:
    """Embedded bits per modified pixel; +inf when nothing changed."""
    if payload_bits < 1:
        raise ValueError("payload_bits must be >= 1")
    changed = modified_pixels(cover, stego_img)
    return INF if changed == 0 else payload_bits / changed


def expected_change_prob(r0: float, r0_cover: float) -> float:
    """Probability that a visited pixel changes, given the payload's zero
    ratio ``r0`` and the cover's zero scheme-LSB ratio ``r0_cover``.

    A pixel stays put exactly when its bit already matches.
    """
    for v in (r0, r0_cover):
        if not 0.0 <= v <= 1.0:
            raise ValueError("ratios must lie in [0, 1]")
    return 1.0 - (r0 * r0_cover + (1.0 - r0) * (1.0 - r0_cover))


def psnr(a: GrayImage, b: GrayImage) -> float:
    _check_shapes(a, b)
    diff = a.pixels.astype(np.float64) - b.pixels.astype(np.float64)
    mse = float(np.mean(diff * diff))
    return INF if mse == 0 else 10.0 * math.log10(255.0 ** 2 / mse)


# -- capacity -----------------------------------------------------------------

def iwsim_worst_side_info() -> int:
    """Largest IWSIM side-information: every band with its maximal value count."""
    total = sim.MAX_SIDE_INFO
    for name in ("lh", "hl", "hh"):
        lo, hi = BAND_RANGE[name]
        count = hi - lo + 1
        width = max(8, (hi - lo).bit_length())
        fmt_bits = (2 + 9) if count <= SI1_MAX_VALUES else (1 + 10)
        total += 1 + MIN_BITS + fmt_bits + count * width
    return total


WORST_SIDE_INFO = {"sim": sim.MAX_SIDE_INFO, "iwsim": iwsim_worst_side_info()}


def capacity_bits(method: str, cover: GrayImage) -> int:
    """Secret bits that always fit, net of header, side-information and indicator."""
    if method in baselines.EMBEDDERS:
        return baselines.capacity_bits(method, cover)
    cfg = stego.EmbedConfig(method)
    usable = stego.capacity_bits(cover) - stego.HEADER_BITS - WORST_SIDE_INFO[cfg.transform]
    return max(usable, 0)


def capacity(method: str, cover: GrayImage) -> float:
    return capacity_bits(method, cover) / cover.size


@dataclass
class EmbedStats:
    payload_bits: int
    modified_pixels: int
    total_pixels: int
    ee: float
    psnr_db: float
    capacity_fraction: float

    @classmethod
    def measure(cls, method: str, cover: GrayImage, stego_img: GrayImage, payload_bits: int):
        return cls(
            payload_bits=payload_bits,
            modified_pixels=modified_pixels(cover, stego_img),
            total_pixels=cover.size,
            ee=embedding_efficiency(cover, stego_img, payload_bits),
            psnr_db=psnr(cover, stego_img),
            capacity_fraction=capacity(method, cover),
        )

"""Grayscale raster type, binary PGM codec and basic pixel utilities."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MalformedHeader, MaxvalUnsupported, OddDimension, TruncatedData


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit single-channel image with even height and width (both >= 2).

    ``pixels`` is a read-only ``uint8`` array of shape (height, width).
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise MalformedHeader(f"expected a 2-D raster, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        h, w = arr.shape
        if h < 2 or w < 2 or h % 2 or w % 2:
            raise OddDimension(f"dimensions must be even and >= 2, got {h}x{w}")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def size(self) -> int:
        return self.pixels.size

    @property
    def shape(self):
        return self.pixels.shape

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"GrayImage({self.height}x{self.width})"


def _parse_header(data: bytes):
    """Return (width, height, maxval, raster offset); comments are skipped."""
    if not data.startswith(b"P5"):
        raise MalformedHeader("missing P5 magic")
    pos, tokens = 2, []
    while len(tokens) < 3:
        if pos >= len(data):
            raise MalformedHeader("header ends prematurely")
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise MalformedHeader("unterminated comment")
            pos = nl + 1
        else:
            start = pos
            while pos < len(data) and not data[pos:pos + 1].isspace():
                pos += 1
            tok = data[start:pos]
            if not tok.isdigit():
                raise MalformedHeader(f"bad header token {tok!r}")
            tokens.append(int(tok))
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise MalformedHeader("missing whitespace after maxval")
    width, height, maxval = tokens
    return width, height, maxval, pos + 1


def load_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) PGM with maxval 255."""
    width, height, maxval, offset = _parse_header(data)
    if maxval != 255:
        raise MaxvalUnsupported(f"maxval {maxval} (only 255 is supported)")
    if width == 0 or height == 0:
        raise MalformedHeader("zero image dimension")
    raster = data[offset:offset + width * height]
    if len(raster) < width * height:
        raise TruncatedData(f"expected {width * height} pixel bytes, got {len(raster)}")
    if width % 2 or height % 2:
        raise OddDimension(f"dimensions must be even, got {height}x{width}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels)


def save_pgm(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def read_pgm(path) -> GrayImage:
    return load_pgm(Path(path).read_bytes())


def write_pgm(path, img: GrayImage) -> None:
    Path(path).write_bytes(save_pgm(img))


def complement(img: GrayImage) -> GrayImage:
    return GrayImage(255 - img.pixels)


def histogram(img: GrayImage) -> np.ndarray:
    """Counts of each intensity 0..255 (length-256 int64 array)."""
    return np.bincount(img.pixels.ravel(), minlength=256).astype(np.int64)

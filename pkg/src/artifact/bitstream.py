"""MSB-first bit stream with fixed-width field codec.

Bits are held one per ``uint8`` element; streams carry an exact bit length
and are never padded to whole octets.
"""
from __future__ import annotations

import numpy as np

from .errors import EmptyStream, FieldOverflow, StreamExhausted

MAX_FIELD = 32


def _check_width(width: int) -> None:
    if not 1 <= width <= MAX_FIELD:
        raise ValueError(f"field width must be in [1, {MAX_FIELD}], got {width}")


def int_to_bits(values, width: int) -> np.ndarray:
    """Expand nonnegative integers to a flat MSB-first bit array."""
    values = np.asarray(values, dtype=np.int64).ravel()
    if values.size and (values.min() < 0 or values.max() >= (1 << width)):
        raise FieldOverflow(f"value outside [0, 2^{width})")
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def bits_to_int(bits: np.ndarray, width: int) -> np.ndarray:
    """Inverse of :func:`int_to_bits` for a bit array of length k*width."""
    weights = np.int64(1) << np.arange(width - 1, -1, -1, dtype=np.int64)
    return bits.reshape(-1, width).astype(np.int64) @ weights


class BitStream:
    """Append-only bit sequence with a read cursor.

    Writes are buffered as chunks and concatenated lazily, so building a
    stream from many small fields followed by one bulk block stays cheap.
    """

    def __init__(self, bits=None):
        self._chunks: list[np.ndarray] = []
        self._flat: np.ndarray | None = np.zeros(0, dtype=np.uint8)
        self._len = 0
        self.cursor = 0
        if bits is not None:
            self.write_bits(bits)

    # -- writing ---------------------------------------------------------

    def write_bits(self, bits) -> "BitStream":
        arr = np.asarray(bits, dtype=np.uint8).ravel()
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        if self._flat is not None and self._flat.size:
            self._chunks = [self._flat]
        self._chunks.append(arr)
        self._flat = None
        self._len += arr.size
        return self

    def write_field(self, value: int, width: int) -> "BitStream":
        _check_width(width)
        if value < 0 or value >= (1 << width):
            raise FieldOverflow(f"{value} does not fit in {width} bits")
        return self.write_bits(int_to_bits([value], width))

    def write_signed(self, value: int, width: int) -> "BitStream":
        """Two's-complement field."""
        lo, hi = -(1 << (width - 1)), (1 << (width - 1)) - 1
        if not lo <= value <= hi:
            raise FieldOverflow(f"{value} does not fit in {width}-bit two's complement")
        return self.write_field(value & ((1 << width) - 1), width)

    def write_codes(self, values, width: int) -> "BitStream":
        """Append many equal-width fields at once."""
        return self.write_bits(int_to_bits(values, width))

    def extend(self, other: "BitStream") -> "BitStream":
        return self.write_bits(other.bits)

    # -- reading ---------------------------------------------------------

    @property
    def bits(self) -> np.ndarray:
        if self._flat is None:
            self._flat = np.concatenate(self._chunks) if self._chunks else np.zeros(0, np.uint8)
            self._chunks = []
        return self._flat

    @property
    def remaining(self) -> int:
        return self._len - self.cursor

    def read_bits(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("negative read length")
        if self.cursor + n > self._len:
            raise StreamExhausted(
                f"need {n} bits at offset {self.cursor}, only {self.remaining} left"
            )
        out = self.bits[self.cursor:self.cursor + n]
        self.cursor += n
        return out

    def read_field(self, width: int) -> int:
        _check_width(width)
        value = 0
        for b in self.read_bits(width):
            value = (value << 1) | int(b)
        return value

    def read_signed(self, width: int) -> int:
        raw = self.read_field(width)
        return raw - (1 << width) if raw >> (width - 1) else raw

    def read_codes(self, count: int, width: int) -> np.ndarray:
        return bits_to_int(self.read_bits(count * width), width)

    # -- misc ------------------------------------------------------------

    def __len__(self) -> int:
        return self._len

    def __eq__(self, other):
        if not isinstance(other, BitStream):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __repr__(self):
        preview = "".join(map(str, self.bits[:32]))
        more = "..." if self._len > 32 else ""
        return f"BitStream({self._len} bits: {preview}{more})"

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    @classmethod
    def from01(cls, text: str) -> "BitStream":
        return cls([1 if c == "1" else 0 for c in text if c in "01"])

    def to_bytes(self) -> bytes:
        """32-bit big-endian bit length followed by the bits packed MSB-first."""
        return self._len.to_bytes(4, "big") + np.packbits(self.bits).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitStream":
        if len(data) < 4:
            raise StreamExhausted("missing length prefix")
        n = int.from_bytes(data[:4], "big")
        bits = np.unpackbits(np.frombuffer(data[4:], dtype=np.uint8))
        if bits.size < n:
            raise StreamExhausted(f"container declares {n} bits, holds {bits.size}")
        return cls(bits[:n])


def write_field(stream: BitStream, value: int, width: int) -> BitStream:
    return stream.write_field(value, width)


def read_field(stream: BitStream, width: int) -> int:
    return stream.read_field(width)


def zero_ratio(stream) -> float:
    """Fraction of 0 bits; accepts a BitStream or a bit array."""
    bits = stream.bits if isinstance(stream, BitStream) else np.asarray(stream)
    if bits.size == 0:
        raise EmptyStream("zero_ratio of an empty stream")
    return float(np.count_nonzero(bits == 0)) / bits.size

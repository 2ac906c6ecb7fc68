"""Mapping-table embedding for Fibonacci, Lucas and Extended-Binary covers.

Each cover pixel is decomposed, its three lowest code positions are looked up
in the scheme's mapping table together with the secret bit, and the
replacement pattern is recomposed. The secret bit is read back as the lowest
code position of the stego pixel, so every pixel is usable.

Embedded payload: 16-bit secret height, 16-bit secret width, then the SIM or
IWSIM stream. The working image is the cover or its complement, whichever has
more 0 scheme-LSBs; the choice is written to the binary LSB of the last
raster pixel, which the seeded traversal never visits.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import iwsim, sim
from .bitstream import BitStream
from .decomp import EXTENDED_BINARY, FIBONACCI, LUCAS, Scheme, zero_lsb_ratio
from .errors import CapacityExceeded, CorruptStream, InvalidPattern
from .image import GrayImage, complement
from .prng import pixel_order

DIM_BITS = 16
HEADER_BITS = 2 * DIM_BITS

# pattern -> (output for secret 0, output for secret 1); patterns are
# written most significant position first: "pos2 pos1 pos0"
MAPPING_ROWS = {
    "fibonacci": {
        "000": ("000", "001"),
        "001": ("010", "001"),
        "010": ("010", "001"),
        "100": ("100", "101"),
        "101": ("100", "101"),
    },
    "lucas": {
        "000": ("000", "001"),
        "001": ("010", "001"),
        "010": ("010", "001"),
        # printed as 101, which is not canonical (3+2 regroups as 4+1)
        "100": ("100", "001"),
    },
    "extended-binary-3": {
        "000": ("000", "001"),
        "001": ("010", "001"),
        "010": ("010", "001"),
        "100": ("100", "001"),
    },
}


@dataclass(frozen=True)
class MappingTable:
    scheme: Scheme
    rows: dict

    @property
    def one_patterns(self) -> frozenset:
        return frozenset(p for pair in self.rows.values() for p in pair if p.endswith("1"))

    def embed_pattern(self, pattern: str, bit: int) -> str:
        try:
            return self.rows[pattern][bit]
        except KeyError:
            raise InvalidPattern(f"{pattern!r} is not a row of the {self.scheme.name} table") from None

    def decode_pattern(self, pattern: str) -> int:
        return int(pattern in self.one_patterns)

    @property
    def embed_lut(self) -> np.ndarray:
        return _luts(self)[0]

    @property
    def decode_lut(self) -> np.ndarray:
        return _luts(self)[1]

    def __hash__(self):
        return hash(self.scheme)


@lru_cache(maxsize=None)
def _luts(table: MappingTable):
    """Per-intensity lookup tables: stego value for (v, bit) and decoded bit."""
    scheme = table.scheme
    weights = scheme.weights
    embed = np.zeros((256, 2), dtype=np.int64)
    for v in range(256):
        code = scheme.table[v].astype(np.int64)
        pattern = f"{code[2]}{code[1]}{code[0]}"
        for bit in (0, 1):
            out = table.embed_pattern(pattern, bit)
            new = code.copy()
            new[2], new[1], new[0] = (int(c) for c in out)
            value = int(new @ weights)
            if value > 255:
                # top of the range (Fibonacci 255 with secret 0): clear the
                # low positions instead, the nearest in-range canonical code
                new[:3] = (bit, 0, 0)
                value = int(new @ weights)
            embed[v, bit] = value
    decode = scheme.lsb_table.astype(np.uint8)
    embed.setflags(write=False)
    return embed, decode


def mapping_table(scheme: Scheme) -> MappingTable:
    try:
        return MappingTable(scheme, MAPPING_ROWS[scheme.name])
    except KeyError:
        raise ValueError(f"no mapping table for scheme {scheme.name}") from None


def map_embed(pattern: str, secret_bit: int, table: MappingTable) -> str:
    return table.embed_pattern(pattern, secret_bit)


# -- pipelines ----------------------------------------------------------------

PIPELINES = {
    "eb-sim": ("sim", EXTENDED_BINARY),
    "eb-iwsim": ("iwsim", EXTENDED_BINARY),
    "fib-iwsim": ("iwsim", FIBONACCI),
    "l-iwsim": ("iwsim", LUCAS),
}
METHOD_LABELS = {"eb-sim": "EB_SIM", "eb-iwsim": "EB_IWSIM",
                 "fib-iwsim": "Fib_IWSIM", "l-iwsim": "L_IWSIM"}


@dataclass(frozen=True)
class EmbedConfig:
    method: str
    seed: int = 0

    def __post_init__(self):
        if self.method not in PIPELINES:
            raise ValueError(f"unknown method {self.method!r}; choose from {sorted(PIPELINES)}")

    @property
    def transform(self) -> str:
        return PIPELINES[self.method][0]

    @property
    def scheme(self) -> Scheme:
        return PIPELINES[self.method][1]


@dataclass
class EmbedResult:
    stego: GrayImage
    payload_bits: int
    side_info_bits: int
    use_complement: int
    zero_ratio_payload: float
    zero_ratio_cover: float


def select_form(cover: GrayImage, scheme: Scheme) -> tuple[int, float, float]:
    r = zero_lsb_ratio(scheme, cover)
    r_comp = zero_lsb_ratio(scheme, complement(cover))
    return int(r_comp > r), r, r_comp


def build_payload(secret: GrayImage, transform: str) -> tuple[BitStream, int]:
    """Header plus transform stream; also returns the side-information size."""
    stream = BitStream()
    stream.write_field(secret.height, DIM_BITS)
    stream.write_field(secret.width, DIM_BITS)
    if transform == "sim":
        side, payload = sim.sim_forward(secret)
        stream.extend(side).extend(payload)
        return stream, len(side)
    if transform == "iwsim":
        body, overhead = iwsim.iwsim_encode(secret)
        return stream.extend(body), overhead
    raise ValueError(f"unknown transform {transform!r}")


def embed_bits(cover: GrayImage, bits, scheme: Scheme, seed: int):
    """Embed a raw bit sequence; returns ``(stego, use_complement, zero-LSB ratio of working image)``."""
    bits = np.asarray(bits, dtype=np.int64).ravel()
    available = cover.size - 1
    if bits.size > available:
        raise CapacityExceeded(bits.size, available)
    table = mapping_table(scheme)
    flag, r, r_comp = select_form(cover, scheme)
    work = (255 - cover.pixels if flag else cover.pixels).astype(np.int64).ravel()
    idx = pixel_order(seed, cover.size)[:bits.size]
    work[idx] = table.embed_lut[work[idx], bits]
    if flag:
        work = 255 - work
    work[-1] = (work[-1] & ~1) | flag
    stego = GrayImage(work.reshape(cover.shape))
    return stego, flag, (r_comp if flag else r)


def extract_bits(stego: GrayImage, scheme: Scheme, seed: int) -> np.ndarray:
    """All bits along the traversal (length ``N - 1``), read in the signalled form."""
    table = mapping_table(scheme)
    flat = stego.pixels.ravel()
    work = 255 - flat if flat[-1] & 1 else flat
    return table.decode_lut[work[pixel_order(seed, stego.size)]]


def embed_detailed(cover: GrayImage, secret: GrayImage, cfg: EmbedConfig) -> EmbedResult:
    payload, side = build_payload(secret, cfg.transform)
    stego, flag, r_cover = embed_bits(cover, payload.bits, cfg.scheme, cfg.seed)
    return EmbedResult(
        stego=stego,
        payload_bits=len(payload),
        side_info_bits=side,
        use_complement=flag,
        zero_ratio_payload=float(np.mean(payload.bits == 0)),
        zero_ratio_cover=r_cover,
    )


def embed(cover: GrayImage, secret: GrayImage, cfg: EmbedConfig) -> GrayImage:
    return embed_detailed(cover, secret, cfg).stego


def parse_payload(reader: BitStream, transform: str) -> GrayImage:
    height = reader.read_field(DIM_BITS)
    width = reader.read_field(DIM_BITS)
    if height == 0 or width == 0:
        raise CorruptStream(f"embedded secret has zero dimension ({height}x{width})")
    if height % 2 or width % 2:
        raise CorruptStream(f"embedded secret has odd dimension ({height}x{width})")
    if transform == "sim":
        return sim.sim_decode(reader, height, width)
    return iwsim.iwsim_decode(reader, height, width)


def extract(stego: GrayImage, cfg: EmbedConfig) -> GrayImage:
    bits = extract_bits(stego, cfg.scheme, cfg.seed)
    return parse_payload(BitStream(bits), cfg.transform)


def capacity_bits(cover: GrayImage) -> int:
    return cover.size - 1

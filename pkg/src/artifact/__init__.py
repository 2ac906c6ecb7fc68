"""Lossless LSB steganography with reversible histogram mappings.

A secret grayscale image is turned into a zero-rich bit stream (SIM or the
wavelet variant IWSIM) and hidden in the lowest code position of each cover
pixel under an alternative number system (Extended-Binary, Fibonacci or
Lucas), so that fewer cover pixels have to change.
"""
from .errors import CapacityExceeded, CorruptStream, StegoError
from .image import GrayImage, read_pgm, write_pgm
from .stego import EmbedConfig, embed, extract

__all__ = ["CapacityExceeded", "CorruptStream", "EmbedConfig", "GrayImage", "StegoError",
           "embed", "extract", "read_pgm", "write_pgm"]
__version__ = "0.1.0"

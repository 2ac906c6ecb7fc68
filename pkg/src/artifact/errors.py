"""Exception hierarchy.

Every failure raised by the package derives from :class:`StegoError`, so the
CLI can map whole families to exit codes without catching anything else.
"""


class StegoError(Exception):
    """Base class for all package errors."""


# -- image I/O --------------------------------------------------------------

class ImageError(StegoError):
    """Invalid raster or unreadable image file."""

    code = "ImageError"


class MalformedHeader(ImageError):
    code = "MalformedHeader"


class MaxvalUnsupported(ImageError):
    code = "MaxvalUnsupported"


class TruncatedData(ImageError):
    code = "TruncatedData"


class OddDimension(ImageError):
    code = "OddDimension"


# -- bit streams ------------------------------------------------------------

class FieldOverflow(StegoError):
    """Value does not fit in the requested field width."""


class StreamExhausted(StegoError):
    """Read past the end of a bit stream."""


class EmptyStream(StegoError):
    """Statistic requested on a zero-length stream."""


# -- decoding / parsing -----------------------------------------------------

class CorruptStream(StegoError):
    """A side-information or payload stream failed validation."""


class NonCanonicalCode(StegoError):
    """Codeword is not the canonical decomposition of its value."""


class InvalidPattern(StegoError):
    """Low-bit pattern has no row in the mapping table."""


class CorruptBands(CorruptStream):
    """Inverse wavelet produced intensities outside [0, 255]."""


class CapacityExceeded(StegoError):
    """Payload does not fit in the cover."""

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"payload needs {required} bits but cover offers {available}"
        )

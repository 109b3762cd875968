"""Exception types shared across the toolkit.

Everything raised on bad data derives from SnowforgeError so the CLI can
map data errors to a single exit code.
"""


class SnowforgeError(Exception):
    """Base class for all data errors raised by this package."""


class MissingFrame(SnowforgeError):
    """A frame index expected on disk is absent."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"missing frame index {index}")


class GeometryMismatch(SnowforgeError):
    """Frames that must share width/height/channels do not."""


class DecodeError(SnowforgeError):
    """An image file could not be decoded into a supported raster."""


class CropOutOfBounds(SnowforgeError):
    """A crop rectangle extends outside the source frame."""


class MaskRangeError(SnowforgeError):
    """A stored mask sample lies outside the encodable residual range."""


class EmptySequence(SnowforgeError):
    """An operation requiring at least one frame received none."""


class SequenceTooShort(SnowforgeError):
    """A sequence has fewer frames than the operation needs."""


class OverlayOutOfBounds(SnowforgeError):
    """An overlay placement violates the source/mask geometry bounds."""


class PairingMismatch(SnowforgeError):
    """Two sequences that must be paired differ in length or geometry."""


class FrameTooSmall(SnowforgeError):
    """A frame is below the minimum size an operation supports."""


class SchemaError(SnowforgeError):
    """A metrics CSV or chart request does not match the expected schema."""

"""Error types shared across the I/O and codec layers."""


class RotDctError(Exception):
    """Base class for all package-specific errors."""


class FormatError(RotDctError):
    """Input stream is not in the expected format (bad magic, malformed header)."""


class TruncatedStreamError(RotDctError):
    """Input stream ended before the declared payload was complete."""


class UnsupportedFormatError(RotDctError):
    """Input is syntactically valid but uses features outside this codec's scope."""


class CorruptStreamError(RotDctError):
    """Stream parsed but carries values that no encoder could have produced."""

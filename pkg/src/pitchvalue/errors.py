"""Exception types raised across the package."""


class PitchValueError(Exception):
    """Base class for all errors raised by pitchvalue."""


class InvalidArgument(PitchValueError, ValueError):
    pass


class InvalidFormat(PitchValueError, ValueError):
    """A file or table does not match its expected layout."""


class InsufficientData(PitchValueError):
    pass


class DegenerateData(PitchValueError):
    """Input has zero spread where a positive spread is required."""


class DegenerateField(PitchValueError):
    pass

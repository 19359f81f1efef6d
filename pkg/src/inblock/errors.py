"""Exception types shared across the package."""


class InBlockError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDistributionError(InBlockError, ValueError):
    """A probability table violates nonnegativity or normalization."""


class SizeError(InBlockError):
    """A table, enumeration, or search space exceeds its configured cap."""


class ShapeError(InBlockError, ValueError):
    """A channel or session does not have the structure an operation requires."""


class SpecFormatError(InBlockError, ValueError):
    """A spec file is malformed; the message names the offending field."""

"""Exception hierarchy shared across the package."""


class BideformError(Exception):
    """Base class for all package-specific errors."""


class FieldMismatchError(BideformError):
    """Raised when values from different scalar fields are combined."""


class ScalarFormatError(BideformError):
    """Raised when a scalar literal cannot be parsed or is not canonical."""


class DimensionMismatchError(BideformError):
    """Raised when matrix/vector shapes are incompatible."""


class GradingError(BideformError):
    """Raised when a degree constraint is violated."""


class MalformedBialgebraError(BideformError):
    """Raised when bialgebra data is structurally unusable."""


class MalformedDeformationError(BideformError):
    """Raised when deformation data is structurally unusable."""


class BoundExceededError(BideformError):
    """Raised when a requested cochain bidegree exceeds the configured bound."""


class InternalInvariantError(BideformError):
    """Raised when a computation violates an invariant that should hold
    identically; signals an implementation bug, not bad input."""


class ParseError(BideformError):
    """Raised on malformed input files; carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotALiftingError(BideformError):
    """Raised when multiplication/comultiplication tables violate the
    filtration required of a lifting."""

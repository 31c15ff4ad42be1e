"""Exception hierarchy shared by every subpackage."""


class TrialgError(Exception):
    """Base class for all errors raised by trialg."""


class DomainError(TrialgError, ValueError):
    """An argument lies outside the domain of an operation."""


class ShapeError(TrialgError, ValueError):
    """Matrix/vector shapes are inconsistent."""


class InvalidInputError(TrialgError, ValueError):
    """An input fails a documented precondition (e.g. not an extended system)."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParameterError(TrialgError, ValueError):
    """Unsupported parameter combination."""


class CapacityError(TrialgError, ValueError):
    """The model space is too small for the requested construction."""


class AlignmentError(TrialgError, ValueError):
    """A Borel set is not a union of whole grid cells."""


class InsufficientDataError(TrialgError, RuntimeError):
    """A finite-horizon selection ran out of candidates."""


class InsufficientTruncationError(TrialgError, ValueError):
    """Too few blocks to form a truncation schedule."""


class UnsupportedOperatorError(TrialgError, TypeError):
    """The operator is not of the symbolic (link list) class required."""

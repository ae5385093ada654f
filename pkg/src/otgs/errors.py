"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so library code raises the most
specific class that applies.
"""


class OTGSError(Exception):
    """Base class for all package errors."""


class ValidationError(OTGSError, ValueError):
    """An argument violates a documented precondition."""


class CostOverflowError(ValidationError):
    """Flow mass was placed on an edge whose cost is infinite."""


class InfeasibleError(OTGSError):
    """No feasible flow / support exists for the instance."""


class InstanceTooLargeError(ValidationError):
    """An exhaustive oracle was asked to enumerate beyond its guard."""


class DatasetFormatError(OTGSError):
    """A dataset file is malformed; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

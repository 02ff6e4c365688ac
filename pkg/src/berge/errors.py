"""Exception types shared across the package."""


class BergeError(Exception):
    """Base class for all package errors."""


class ParameterError(BergeError, ValueError):
    """An argument violates a precondition (arity, range, malformed value)."""


class OutOfWindowError(BergeError):
    """A vertex or edge lies beyond the colourable window."""


class OracleLoadError(BergeError):
    """A colouring file failed validation; the message names the first offender."""


class SizeGuardError(BergeError):
    """An exact search was refused because the instance exceeds the size guard."""


class BudgetExceededError(BergeError):
    """A bounded computation ran out of nodes or window growth."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class Inconclusive(BergeError):
    """A finite-window search could not decide; the caller may grow the window.

    Distinct from a negative answer: raising this never asserts absence.
    """

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

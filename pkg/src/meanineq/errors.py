"""Exception hierarchy shared by every module.

Callers can catch :class:`MeanIneqError` to handle any failure raised by
this package; the CLI maps the whole hierarchy to exit code 2.
"""


class MeanIneqError(Exception):
    """Base class for all errors raised by meanineq."""


class UsageError(MeanIneqError):
    """Bad call: wrong mode, dimension mismatch, unknown id, invalid config."""


class DomainError(MeanIneqError):
    """Input outside the mathematical domain of an operation."""


class NotPositiveDefiniteError(DomainError):
    """A matrix required to be positive definite is not (at the active floor)."""

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class PreconditionError(MeanIneqError):
    """A structural precondition failed (non-commuting pair, bad partition of unity)."""


class NumericError(MeanIneqError):
    """A numerical kernel failed to converge or produced non-finite output."""

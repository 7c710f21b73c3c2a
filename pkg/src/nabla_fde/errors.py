"""Exception hierarchy.

Two families matter to callers (and map to CLI exit codes): :class:`DomainError`
for inputs outside an operation's domain, and :class:`NumericalError` for
computations that could not reach the requested accuracy.
"""

from __future__ import annotations


class NablaFDEError(Exception):
    """Base class for all package errors."""


class DomainError(NablaFDEError, ValueError):
    """An argument lies outside the domain of the operation."""


class InsufficientHistoryError(DomainError):
    """A backward difference needs samples before the start of the signal."""

    def __init__(self, missing: int, start: int) -> None:
        self.missing = missing
        self.start = start
        super().__init__(
            f"insufficient history: grid point {missing} is required "
            f"but the signal starts at {start}"
        )


class PoleError(DomainError):
    """Evaluation exactly at (or numerically on top of) a pole."""


class NoPoleError(DomainError):
    """The transfer function has no finite nonzero pole (lambda == 0)."""


class NumericalError(NablaFDEError, ArithmeticError):
    """A numerical procedure failed to deliver the requested result."""


class SeriesNotConvergent(NumericalError):
    """The Mittag-Leffler power series diverges for ``|lambda| >= 1``."""


class NonConvergedAtCap(NumericalError):
    """A series was still above tolerance when the term cap was reached."""


class ResponseOverflow(NumericalError):
    """A time-domain response left the floating-point range."""

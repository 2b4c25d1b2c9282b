"""
Exception hierarchy shared by the spectral engines, services and CLI.
"""

from typing import Optional


class MGLError(Exception):
    """Base class for every error raised by the package."""


class MeasureValidationError(MGLError, ValueError):
    """A measure description violates the MeasureSpec invariants."""


class DomainError(MGLError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class InconsistentRootError(MGLError, ArithmeticError):
    """The monodromy at a claimed root has no fixed vector within tolerance."""

    def __init__(self, b: float, residual: float):
        self.b = b
        self.residual = residual
        super().__init__(
            f"no fixed vector of M(b) at b={b!r}: smallest singular value of M - I is {residual:.3e}"
        )


class ConvergenceError(MGLError, ArithmeticError):
    """An iterative solver stopped at its iteration cap."""

    def __init__(self, message: str, off_diagonal_norm: Optional[float] = None):
        self.off_diagonal_norm = off_diagonal_norm
        if off_diagonal_norm is not None:
            message = f"{message} (off-diagonal norm {off_diagonal_norm:.3e})"
        super().__init__(message)


class ReportError(MGLError, OSError):
    """An output file could not be written."""

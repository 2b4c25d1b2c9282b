from .config import Settings, get_settings
from .errors import (
    MGLError,
    MeasureValidationError,
    DomainError,
    InconsistentRootError,
    ConvergenceError,
    ReportError,
)
from .logging import configure_logging

__all__ = [
    "Settings",
    "get_settings",
    "MGLError",
    "MeasureValidationError",
    "DomainError",
    "InconsistentRootError",
    "ConvergenceError",
    "ReportError",
    "configure_logging",
]

"""
Pydantic schemas for reports written by the CLI and the analysis service.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class ErrorReport(BaseModel):
    """Relative eigenvalue errors of the discrete oracle against the analytic spectrum."""
    model_config = ConfigDict(frozen=True)

    count: int = Field(..., ge=0)
    analytic: list[float]
    oracle: list[float]
    relative_errors: list[float]
    max_error: float = Field(..., ge=0)
    length_mismatch: bool = False


class CountingSample(BaseModel):
    """Eigenvalue counting function of -Laplacian at x, with the Weyl ratio pi N(x) / sqrt(x)."""
    model_config = ConfigDict(frozen=True)

    x: float = Field(..., gt=0)
    count: int = Field(..., ge=0)
    ratio: float


class OrthogonalityReport(BaseModel):
    """Gram matrix of the first m normalised eigenfunctions."""
    model_config = ConfigDict(frozen=True)

    gram: list[list[float]]
    max_off_diagonal: float = Field(..., ge=0)
    max_diagonal_error: float = Field(..., ge=0)


class InvariantResult(BaseModel):
    """One named invariant check."""
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    value: float
    threshold: float
    detail: Optional[str] = None


class RunReport(BaseModel):
    """All invariant checks for one measure."""
    model_config = ConfigDict(frozen=True)

    measure: dict
    b_max: float
    n_eigenpairs: int
    spectrum: list[dict]
    checks: list[InvariantResult]
    timings: dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[InvariantResult]:
        return [c for c in self.checks if not c.passed]

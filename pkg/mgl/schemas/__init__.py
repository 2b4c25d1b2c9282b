from mgl.schemas.reports import (
    CountingSample,
    ErrorReport,
    InvariantResult,
    OrthogonalityReport,
    RunReport,
)

__all__ = ["CountingSample", "ErrorReport", "InvariantResult", "OrthogonalityReport", "RunReport"]

"""
Application configuration using Pydantic settings.
Loads environment variables (prefix ``MGL_``) with validation.
"""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical and output settings loaded from environment variables."""

    # Application
    app_name: str = "Measure-Geometric Laplacian Spectra"
    app_version: str = "1.0.0"
    log_level: str = "WARNING"

    # Tangent-line equations
    root_xtol: float = Field(default=1e-14, gt=0, description="Absolute tolerance of bracketed refinement")
    newton_steps: int = Field(default=5, ge=0, le=20)
    tan_scan_intervals: int = Field(default=10_000, ge=100)
    tangency_threshold: float = Field(default=1e-8, gt=0)

    # Monodromy scan
    scan_step_cap: float = Field(default=0.05, gt=0)
    scan_step_divisor: float = Field(default=8.0, gt=0)
    double_root_tol: float = Field(default=1e-8, gt=0)
    fixed_vector_tol: float = Field(default=1e-6, gt=0)
    weyl_slack: int = Field(default=2, ge=0)
    scan_refinements: int = Field(default=2, ge=0, description="Rescans at a quarter step when the oscillation count disagrees")
    cluster_gap: float = Field(default=1e-3, gt=0, description="Relative spacing below which neighbouring roots are orthogonalised")

    # Operator calculus
    samples_per_segment: int = Field(default=1000, ge=10)

    # Discrete oracle
    oracle_grid: int = Field(default=2000, ge=10)
    jacobi_max_size: int = Field(default=200, ge=3)
    jacobi_max_sweeps: int = Field(default=100, ge=1)
    jacobi_tol: float = Field(default=1e-12, gt=0)

    # Output
    significant_digits: int = Field(default=15, ge=1, le=17)
    max_workers: int = Field(default=4, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="MGL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()

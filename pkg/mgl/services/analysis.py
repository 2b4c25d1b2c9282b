"""
Spectral service that orchestrates the spectral engines for the CLI.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel

from mgl.core.config import Settings, get_settings
from mgl.core.errors import DomainError, ReportError
from mgl.schemas.reports import CountingSample, ErrorReport, RunReport
from mgl.spectral import (
    CanonicalForm,
    EigenPair,
    MeasureSpec,
    ScanOptions,
    SpectrumResult,
    closed_form_spectrum,
    compare_spectra,
    counting_function,
    counting_sweep,
    find_spectrum,
    oracle_eigenvalues,
    run_invariant_suite,
    to_canonical,
)

logger = logging.getLogger(__name__)


class SpectralService:
    """
    Service for running spectral computations.
    Canonicalises measures, runs independent solves on a thread pool and
    writes CSV/JSON reports.
    """

    def __init__(self, settings: Optional[Settings] = None):
        """Initialize the service (one thread pool per process)."""
        self.settings = settings or get_settings()
        self._executor = ThreadPoolExecutor(max_workers=self.settings.max_workers)

    def shutdown(self) -> None:
        self._executor.shutdown(wait=True)

    @staticmethod
    def canonical(spec: MeasureSpec) -> CanonicalForm:
        return to_canonical(spec)

    # ==================== Spectra ====================

    def spectrum(self, spec: MeasureSpec, b_max: float, tol: Optional[float] = None) -> SpectrumResult:
        """
        Eigenpairs with b <= b_max of the canonical form of ``spec``.

        Args:
            spec: Measure
            b_max: Largest frequency
            tol: Root tolerance in b (default from settings)

        Returns:
            SpectrumResult sorted by |lambda|
        """
        canonical = self.canonical(spec)
        if canonical.shift:
            logger.info("measure rotated by %.15g to put its last atom at 1", canonical.shift)
        return find_spectrum(canonical.spec, b_max, ScanOptions(tol=tol))

    def closed_form_batch(self, alpha: float, n_atoms: int, ks: Sequence[int]) -> list[EigenPair]:
        """Closed-form eigenpairs for several indices, solved in parallel and sorted by |b|."""
        futures = [
            self._executor.submit(closed_form_spectrum, alpha, n_atoms, k, k)
            for k in ks
        ]
        pairs = [f.result()[0] for f in futures]
        return sorted(pairs, key=lambda p: (abs(p.b), p.k))

    def eigenpair(self, spec: MeasureSpec, k: int) -> EigenPair:
        """
        Eigenpair with closed-form index k (one- and two-atom families) or rank k.

        Raises:
            DomainError: If no eigenpair carries the index
        """
        canonical = self.canonical(spec).spec
        mass = float(canonical.edges()[-1])
        b_max = math.pi * (2 * abs(k) + canonical.n_atoms + 4) / mass
        for _ in range(4):
            result = find_spectrum(canonical, b_max)
            for pair in result.pairs:
                if pair.k == k:
                    return pair
            b_max *= 2.0
        raise DomainError(f"no eigenpair with index {k} below b = {b_max / 2:.6g}")

    # ==================== Oracle ====================

    def oracle(self, spec: MeasureSpec, n: int, m: int) -> ErrorReport:
        """
        Compare the first m analytic eigenvalues with the discrete oracle at grid n.
        The analytic scan and the oracle eigensolve run concurrently.
        """
        if m < 0:
            raise DomainError(f"m must be non-negative, got {m}")
        canonical = self.canonical(spec).spec
        if m == 0:
            return compare_spectra([], [], 0)

        mass = float(canonical.edges()[-1])
        b_max = math.pi * (m + canonical.n_atoms + 2) / mass
        analytic_job = self._executor.submit(
            find_spectrum, canonical, b_max, ScanOptions(attach_eigenfunctions=False)
        )
        oracle_job = self._executor.submit(oracle_eigenvalues, canonical, n, m)
        return compare_spectra(analytic_job.result().eigenvalues, oracle_job.result(), m)

    # ==================== Counting and checks ====================

    def count(self, spec: MeasureSpec, x: float) -> CountingSample:
        return counting_function(spec, x)

    def sweep(self, spec: MeasureSpec, xs: Sequence[float]) -> pd.DataFrame:
        return counting_sweep(spec, xs)

    def check(self, spec: MeasureSpec) -> RunReport:
        return run_invariant_suite(spec, oracle_grid=self.settings.oracle_grid)

    # ==================== Writers ====================

    def write_csv(self, df: pd.DataFrame, path: Union[str, Path]) -> Path:
        """Write a table with 15 significant digits and '\\n' line endings."""
        path = Path(path)
        digits = self.settings.significant_digits
        try:
            df.to_csv(path, index=False, float_format=f"%.{digits}g", lineterminator="\n")
        except OSError as exc:
            raise ReportError(f"cannot write {path}: {exc}") from exc
        logger.info("wrote %d rows to %s", len(df), path)
        return path

    @staticmethod
    def to_json(payload: Union[BaseModel, dict, list]) -> str:
        if isinstance(payload, BaseModel):
            payload = payload.model_dump(mode="json")
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# Singleton instance (created on first use)
spectral_service: Optional[SpectralService] = None


def get_spectral_service() -> SpectralService:
    """Get or create the spectral service singleton."""
    global spectral_service
    if spectral_service is None:
        spectral_service = SpectralService()
    return spectral_service


def init_spectral_service(settings: Optional[Settings] = None) -> SpectralService:
    """Initialize the spectral service (call at startup)."""
    global spectral_service
    spectral_service = SpectralService(settings)
    return spectral_service

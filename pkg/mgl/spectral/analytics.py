"""
Spectral Analytics Module
Eigenvalue counting, Weyl ratios, orthogonality and the invariant suite behind ``mgl check``.
"""

import logging
import math
import time
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd

from mgl.core.config import get_settings
from mgl.core.errors import DomainError
from mgl.schemas.reports import CountingSample, InvariantResult, OrthogonalityReport, RunReport
from mgl.spectral.calculus import (
    apply_laplacian,
    eigen_residual,
    inner_product,
    periodic_jumps,
    system_residual,
)
from mgl.spectral.closed_form import (
    closed_form_family,
    eigenpair_one_atom,
    eigenpair_two_atoms,
    special_alpha_class,
)
from mgl.spectral.measure import MeasureSpec, to_canonical
from mgl.spectral.monodromy import ScanOptions, SpectrumResult, find_spectrum, monodromy
from mgl.spectral.oracle import compare_spectra, oracle_eigenvalues

logger = logging.getLogger(__name__)


def _canonical(spec: MeasureSpec) -> MeasureSpec:
    return to_canonical(spec).spec


def counting_function(spec: MeasureSpec, x: float) -> CountingSample:
    """
    N(x): eigenvalues of -Laplacian not exceeding x, counted with multiplicity.

    Args:
        spec: Measure
        x: Threshold (> 0)

    Returns:
        CountingSample with ratio pi N(x) / sqrt(x)
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    b_max = math.sqrt(x)
    result = find_spectrum(_canonical(spec), b_max, ScanOptions(attach_eigenfunctions=False))
    count = int(sum(1 for p in result.pairs if p.b * p.b <= x))
    return CountingSample(x=x, count=count, ratio=math.pi * count / b_max)


def counting_sweep(spec: MeasureSpec, xs: Sequence[float]) -> pd.DataFrame:
    """
    Counting function on several thresholds from a single scan.

    Returns:
        DataFrame with columns x, count, ratio in the order of ``xs``
    """
    xs = [float(x) for x in xs]
    if not xs:
        return pd.DataFrame(columns=["x", "count", "ratio"])
    if min(xs) <= 0:
        raise DomainError("every threshold must be positive")

    result = find_spectrum(_canonical(spec), math.sqrt(max(xs)), ScanOptions(attach_eigenfunctions=False))
    squares = np.sort(np.array([p.b * p.b for p in result.pairs]))

    rows = []
    for x in xs:
        count = int(np.searchsorted(squares, x, side="right"))
        rows.append(CountingSample(x=x, count=count, ratio=math.pi * count / math.sqrt(x)).model_dump())
    return pd.DataFrame(rows, columns=["x", "count", "ratio"])


def _spectrum_with_at_least(spec: MeasureSpec, m: int) -> SpectrumResult:
    """Scan far enough to hold at least m eigenpairs."""
    mass = float(spec.edges()[-1])
    b_max = math.pi * (m + spec.n_atoms + 2) / mass
    for _ in range(8):
        result = find_spectrum(spec, b_max)
        if result.count >= m:
            return result
        b_max *= 2.0
    return result


def orthogonality_suite(spec: MeasureSpec, m: int) -> OrthogonalityReport:
    """
    Gram matrix of the first m eigenfunctions in the eta inner product.

    Args:
        spec: Measure
        m: Number of eigenfunctions (>= 1)

    Returns:
        OrthogonalityReport with the largest off-diagonal entry and the largest
        deviation of a diagonal entry from 1
    """
    if m < 1:
        raise DomainError(f"m must be at least 1, got {m}")
    canonical = _canonical(spec)
    pairs = _spectrum_with_at_least(canonical, m).pairs[:m]
    functions = [p.fn for p in pairs]

    gram = np.array([[inner_product(f, g, canonical) for g in functions] for f in functions])
    off = gram - np.diag(np.diag(gram))
    return OrthogonalityReport(
        gram=gram.tolist(),
        max_off_diagonal=float(np.abs(off).max()) if len(functions) > 1 else 0.0,
        max_diagonal_error=float(np.abs(np.diag(gram) - 1.0).max()),
    )


def asymptotic_limits(alpha: float, k: int) -> dict[str, float]:
    """
    Large-index diagnostics of the closed-form families at index k > 0.

    Every entry tends to 0 as k grows.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    one_pos = eigenpair_one_atom(alpha, k)
    two_pos = eigenpair_two_atoms(alpha, k)
    two_neg = eigenpair_two_atoms(alpha, -k)
    two_mirror = eigenpair_two_atoms(alpha, -k - 1)
    half_pi = math.pi / 2

    return {
        "one_atom_frequency": abs(one_pos.b / (2 * math.pi * k) - 1.0),
        "one_atom_phase": abs(one_pos.fn.phases[0] - half_pi),
        "one_atom_phase_negative": abs(eigenpair_one_atom(alpha, -k).fn.phases[0] + half_pi),
        "two_atom_frequency": abs(two_pos.b / (2 * math.pi * k) - 1.0),
        "two_atom_second_phase": abs(two_pos.fn.phases[1] - math.pi),
        "two_atom_second_phase_negative": min(two_neg.fn.phases[1], 2 * math.pi - two_neg.fn.phases[1]),
        "two_atom_mirror": abs(-two_pos.b / two_mirror.b - 1.0),
    }


class InvariantSuite:
    """
    Structural checks for one measure.
    Each check carries its own fixed threshold.
    """

    def __init__(
        self,
        b_max: Optional[float] = None,
        oracle_grid: Optional[int] = None,
        oracle_count: int = 6,
        gram_count: int = 6,
    ):
        """
        Initialize the suite.

        Args:
            b_max: Largest frequency scanned (default: room for about 12 eigenpairs)
            oracle_grid: Grid count of the discrete oracle; 0 skips the oracle,
                None uses the configured default
            oracle_count: Number of eigenvalues compared against the oracle
            gram_count: Number of eigenfunctions in the Gram check
        """
        settings = get_settings()
        self.b_max = b_max
        self.oracle_grid = settings.oracle_grid if oracle_grid is None else oracle_grid
        self.oracle_count = oracle_count
        self.gram_count = gram_count
        self.timings: dict[str, float] = {}

    def _timed(self, name: str, check: Callable[[], list[InvariantResult]]) -> list[InvariantResult]:
        start = time.perf_counter()
        results = check()
        self.timings[name] = time.perf_counter() - start
        return results

    @staticmethod
    def _result(name: str, value: float, threshold: float, detail: Optional[str] = None) -> InvariantResult:
        passed = bool(value <= threshold)
        if not passed:
            detail = detail or f"{name}: {value:.3e} exceeds {threshold:.1e}"
        return InvariantResult(name=name, passed=passed, value=float(value), threshold=threshold, detail=detail)

    def run(self, spec: MeasureSpec) -> RunReport:
        """Run every check and collect the results."""
        canonical = _canonical(spec)
        b_max = self.b_max or math.pi * (12 + canonical.n_atoms) / float(canonical.edges()[-1])
        self.timings = {}

        start = time.perf_counter()
        result = find_spectrum(canonical, b_max)
        self.timings["spectrum"] = time.perf_counter() - start

        checks: list[InvariantResult] = []
        checks += self._timed("structure", lambda: self._structure(canonical, result))
        checks += self._timed("residuals", lambda: self._residuals(canonical, result))
        checks += self._timed("orthogonality", lambda: self._orthogonality(canonical, result))
        checks += self._timed("closed_form", lambda: self._closed_form(canonical, result))
        if self.oracle_grid:
            checks += self._timed("oracle", lambda: self._oracle(canonical, result))

        for failed in (c for c in checks if not c.passed):
            logger.warning("invariant failed: %s", failed.detail)

        return RunReport(
            measure=spec.model_dump(mode="json"),
            b_max=b_max,
            n_eigenpairs=result.count,
            spectrum=[
                {"k": p.k, "label": p.label, "b": p.b, "lambda": p.eigenvalue, "multiplicity": p.multiplicity}
                for p in result.pairs
            ],
            checks=checks,
            timings=dict(self.timings),
        )

    def _structure(self, spec: MeasureSpec, result: SpectrumResult) -> list[InvariantResult]:
        det_error = 0.0
        for b in np.concatenate((result.roots, np.linspace(0.0, result.b_max, 50))):
            m = monodromy(spec, float(b))
            scale = max(1.0, max(abs(m.m11), abs(m.m12), abs(m.m21), abs(m.m22)) ** 2)
            det_error = max(det_error, abs(m.det - 1.0) / scale)

        zero_pairs = [p for p in result.pairs if p.b == 0.0]
        constant_ok = (
            len(zero_pairs) == 1
            and float(np.max(periodic_jumps(zero_pairs[0].fn))) <= 1e-12
            and float(np.ptp(zero_pairs[0].fn.amplitudes)) <= 1e-12
        )
        largest = max(p.eigenvalue for p in result.pairs)

        return [
            self._result("unimodularity", det_error, 1e-10),
            InvariantResult(
                name="constant_kernel",
                passed=constant_ok,
                value=float(len(zero_pairs)),
                threshold=1.0,
                detail=None if constant_ok else "b = 0 must be a simple root with a constant eigenfunction",
            ),
            self._result("non_positivity", largest, 1e-10),
            InvariantResult(
                name="weyl_count",
                passed=result.weyl_ok,
                value=float(result.count),
                threshold=result.expected_count,
                detail=None if result.weyl_ok else
                f"weyl_count: {result.count} roots found, about {result.expected_count:.1f} expected",
            ),
        ]

    def _residuals(self, spec: MeasureSpec, result: SpectrumResult) -> list[InvariantResult]:
        samples = get_settings().samples_per_segment
        eig = max(eigen_residual(p.fn, p.eigenvalue, spec, samples) for p in result.pairs)
        system = max(system_residual(p.fn, spec) for p in result.pairs)
        quadratic = max(
            inner_product(apply_laplacian(p.fn, spec), p.fn, spec) / max(1.0, abs(p.eigenvalue))
            for p in result.pairs
        )
        return [
            self._result("eigen_residual", eig, 1e-8),
            self._result("system_residual", system, 1e-10),
            self._result("laplacian_form", quadratic, 1e-10),
        ]

    def _orthogonality(self, spec: MeasureSpec, result: SpectrumResult) -> list[InvariantResult]:
        functions = [p.fn for p in result.pairs[: self.gram_count]]
        gram = np.array([[inner_product(f, g, spec) for g in functions] for f in functions])
        off = float(np.abs(gram - np.diag(np.diag(gram))).max()) if len(functions) > 1 else 0.0
        diag = float(np.abs(np.diag(gram) - 1.0).max())
        return [
            self._result("gram_off_diagonal", off, 1e-8),
            self._result("gram_diagonal", diag, 1e-10),
        ]

    def _closed_form(self, spec: MeasureSpec, result: SpectrumResult) -> list[InvariantResult]:
        family = closed_form_family(spec)
        if family is None:
            return []
        n_atoms, alpha = family
        solver = eigenpair_one_atom if n_atoms == 1 else eigenpair_two_atoms

        labelled = [p for p in result.pairs if p.label == "closed_form"]
        deviation = max((abs(abs(solver(alpha, p.k).b) - p.b) for p in labelled), default=0.0)
        checks = [
            self._result("closed_form_agreement", deviation, 1e-9),
            InvariantResult(
                name="closed_form_labels",
                passed=len(labelled) == result.count,
                value=float(result.count - len(labelled)),
                threshold=0.0,
                detail=None if len(labelled) == result.count else "some roots have no closed-form index",
            ),
        ]

        if n_atoms == 2:
            special = special_alpha_class(alpha)
            if special.matched and 1.0 / alpha <= result.b_max:
                gap = float(np.min(np.abs(result.roots - 1.0 / alpha)))
                checks.append(self._result("special_alpha_root", gap, 1e-9))
        return checks

    def _oracle(self, spec: MeasureSpec, result: SpectrumResult) -> list[InvariantResult]:
        count = min(self.oracle_count, result.count)
        oracle = oracle_eigenvalues(spec, self.oracle_grid, count)
        report = compare_spectra(result.eigenvalues, oracle, count)
        return [self._result("oracle_agreement", report.max_error, 1e-2)]


def run_invariant_suite(spec: MeasureSpec, b_max: Optional[float] = None, oracle_grid: Optional[int] = None) -> RunReport:
    """Convenience wrapper around ``InvariantSuite``."""
    return InvariantSuite(b_max=b_max, oracle_grid=oracle_grid).run(spec)

"""
Discrete Oracle Module
Independent check of the analytic spectra: approximate eta by a purely atomic
measure on a cycle and eigen-solve its weighted cycle-graph Laplacian.

For atoms with weights w_1..w_M on the cycle,

    (Delta f)_i = [(f_{i+1} - f_i) / w_i - (f_i - f_{i-1}) / w_{i-1}] / w_i,

and the similarity W^{1/2} Delta W^{-1/2} with W = diag(w) is symmetric.
"""

import logging
import math
from typing import Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from mgl.core.config import get_settings
from mgl.core.errors import ConvergenceError, DomainError
from mgl.schemas.reports import ErrorReport
from mgl.spectral.measure import MeasureSpec

logger = logging.getLogger(__name__)

_MERGE_TOL = 1e-12


class AtomicApprox(BaseModel):
    """Purely atomic measure on the cycle (0, 1]."""

    model_config = ConfigDict(frozen=True)

    positions: tuple[float, ...]
    weights: tuple[float, ...]
    is_original: tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def total_mass(self) -> float:
        return float(sum(self.weights))


class SymmetricProfile(BaseModel):
    """Symmetrised cycle Laplacian W^{1/2} Delta W^{-1/2} and the weights it came from."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def discretize(spec: MeasureSpec, n: int) -> AtomicApprox:
    """
    Replace the continuous part by midpoint atoms.

    Each inter-atom segment (z_{j-1}, z_j] is cut into max(1, round(n dF_j))
    cells of equal length in x; each cell becomes an atom at its midpoint
    carrying its nu-mass. The original atoms are kept with their weights.

    Args:
        spec: Measure (canonical or not)
        n: Grid cells per unit of continuous mass; grids below 10 are only
            useful for inspection

    Returns:
        AtomicApprox sorted by position
    """
    if n < 1:
        raise DomainError(f"grid count must be positive, got {n}")
    if n < 10:
        logger.warning("grid count %d is too coarse for spectral comparisons", n)

    cont = spec.continuous
    bounds = np.concatenate(([0.0], spec.positions))
    positions: list[float] = []
    weights: list[float] = []
    original: list[bool] = []

    for j, atom in enumerate(spec.atoms):
        left, right = float(bounds[j]), float(bounds[j + 1])
        mass = float(cont.value(right)) - float(cont.value(left))
        cells = max(1, int(round(n * mass)))
        cell_edges = np.linspace(left, right, cells + 1)
        masses = np.diff(np.asarray(cont.value(cell_edges), dtype=float))
        mids = 0.5 * (cell_edges[:-1] + cell_edges[1:])
        positions.extend(float(x) for x in mids)
        weights.extend(float(w) for w in masses)
        original.extend([False] * cells)

        positions.append(atom.z)
        weights.append(atom.alpha)
        original.append(True)

    # the continuous mass beyond the last atom wraps onto the start of the cycle
    if bounds[-1] < 1.0:
        left, right = float(bounds[-1]), 1.0
        mass = float(cont.value(right)) - float(cont.value(left))
        cells = max(1, int(round(n * mass)))
        cell_edges = np.linspace(left, right, cells + 1)
        masses = np.diff(np.asarray(cont.value(cell_edges), dtype=float))
        mids = 0.5 * (cell_edges[:-1] + cell_edges[1:])
        positions.extend(float(x) for x in mids)
        weights.extend(float(w) for w in masses)
        original.extend([False] * cells)

    order = np.argsort(positions, kind="stable")
    merged_pos: list[float] = []
    merged_w: list[float] = []
    merged_orig: list[bool] = []
    for i in order:
        if merged_pos and positions[i] - merged_pos[-1] < _MERGE_TOL:
            merged_w[-1] += weights[i]
            merged_orig[-1] = merged_orig[-1] or original[i]
            continue
        merged_pos.append(positions[i])
        merged_w.append(weights[i])
        merged_orig.append(original[i])

    logger.debug("discretised measure into %d atoms", len(merged_pos))
    return AtomicApprox(positions=tuple(merged_pos), weights=tuple(merged_w), is_original=tuple(merged_orig))


def laplacian_profile(a: AtomicApprox) -> SymmetricProfile:
    """
    Symmetric form of the cycle Laplacian of an atomic measure.

    Entries: B_{i,i+1} = B_{i+1,i} = 1 / (w_i sqrt(w_i w_{i+1})) and
    B_{ii} = -(1/w_i + 1/w_{i-1}) / w_i, indices modulo M.
    """
    m = a.size
    if m < 3:
        raise DomainError(f"cycle Laplacian needs at least 3 atoms, got {m}")

    w = np.asarray(a.weights, dtype=float)
    w_next = np.roll(w, -1)
    w_prev = np.roll(w, 1)
    idx = np.arange(m)

    matrix = np.zeros((m, m))
    matrix[idx, idx] = -(1.0 / w + 1.0 / w_prev) / w
    coupling = 1.0 / (w * np.sqrt(w * w_next))
    matrix[idx, (idx + 1) % m] = coupling
    matrix[(idx + 1) % m, idx] = coupling
    return SymmetricProfile(matrix=matrix, weights=w)


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = 100, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi eigenvalue algorithm for a real symmetric matrix.

    Each rotation annihilates one off-diagonal pair; rows and columns are
    updated as whole vectors. Sweeps stop once the off-diagonal Frobenius norm
    falls below tol times the Frobenius norm of the matrix; pairs that are
    negligible next to both diagonal entries are dropped after the fourth sweep.

    Returns:
        (eigenvalues, eigenvectors as columns), unsorted

    Raises:
        ConvergenceError: If the sweep cap is reached first
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    upper = np.triu_indices(n, 1)

    def off_norm() -> float:
        # summed directly; sum(a*a) - sum(diag**2) cancels below sqrt(eps) * scale
        return float(math.sqrt(2.0) * np.linalg.norm(a[upper]))

    for sweep in range(max_sweeps):
        if off_norm() <= tol * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = 100.0 * abs(apq)
                app, aqq = abs(a[p, p]), abs(a[q, q])
                if sweep > 3 and app + g == app and aqq + g == aqq:
                    a[p, q] = a[q, p] = 0.0
                    continue
                if apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + g == abs(h):
                    # tau**2 would overflow; t ~ 1 / (2 tau)
                    t = apq / h
                else:
                    tau = 0.5 * h / apq
                    t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    residual = off_norm()
    if residual <= tol * scale:
        return np.diag(a).copy(), v
    raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps", residual)


def lowest_eigenpairs(
    p: SymmetricProfile,
    m: int,
    method: Literal["auto", "jacobi", "lapack"] = "auto",
) -> list[tuple[float, np.ndarray]]:
    """
    The m eigenvalues closest to 0 (all are non-positive) with orthonormal eigenvectors.

    Args:
        p: Symmetric profile
        m: Number of eigenpairs (1 <= m <= M)
        method: 'jacobi', 'lapack' (numpy eigh) or 'auto' (Jacobi up to the
            configured size)

    Returns:
        List of (eigenvalue, eigenvector) in decreasing eigenvalue order
    """
    size = p.size
    if not 1 <= m <= size:
        raise DomainError(f"m must lie in 1..{size}, got {m}")

    settings = get_settings()
    if method == "auto":
        method = "jacobi" if size <= settings.jacobi_max_size else "lapack"
    logger.info("solving %dx%d profile with %s", size, size, method)

    if method == "jacobi":
        values, vectors = jacobi_eigh(p.matrix, settings.jacobi_max_sweeps, settings.jacobi_tol)
    else:
        values, vectors = np.linalg.eigh(p.matrix)

    order = np.argsort(values)[::-1][:m]
    return [(float(values[i]), vectors[:, i]) for i in order]


def oracle_eigenvalues(spec: MeasureSpec, n: int, m: int) -> list[float]:
    """First m eigenvalues of the discretised measure, closest to 0 first."""
    profile = laplacian_profile(discretize(spec, n))
    return [lam for lam, _ in lowest_eigenpairs(profile, min(m, profile.size))]


def compare_spectra(analytic: Sequence[float], oracle: Sequence[float], m: int) -> ErrorReport:
    """
    Relative errors |oracle - analytic| / max(1, |analytic|) for the first m entries.

    ``analytic`` may be a SpectrumResult or any sequence of eigenvalues sorted
    by magnitude. A length shortfall is reported, not raised.
    """
    if hasattr(analytic, "eigenvalues"):
        analytic = analytic.eigenvalues
    analytic = [float(x) for x in analytic]
    oracle = [float(x) for x in oracle]

    count = min(m, len(analytic), len(oracle))
    mismatch = count < m
    if mismatch:
        logger.warning("spectrum comparison truncated to %d of %d entries", count, m)

    errors = [abs(oracle[i] - analytic[i]) / max(1.0, abs(analytic[i])) for i in range(count)]
    return ErrorReport(
        count=count,
        analytic=analytic[:count],
        oracle=oracle[:count],
        relative_errors=errors,
        max_error=max(errors, default=0.0),
        length_mismatch=mismatch,
    )


def weighted_inner(f: np.ndarray, g: np.ndarray, weights: np.ndarray) -> float:
    """<f, g>_w = sum_i w_i f_i g_i."""
    return float(np.sum(np.asarray(weights) * np.asarray(f) * np.asarray(g)))


def cycle_operator(a: AtomicApprox, f: np.ndarray) -> np.ndarray:
    """Apply the unsymmetrised cycle Laplacian to a vector of atom values."""
    w = np.asarray(a.weights, dtype=float)
    f = np.asarray(f, dtype=float)
    forward = (np.roll(f, -1) - f) / w
    return (forward - np.roll(forward, 1)) / w

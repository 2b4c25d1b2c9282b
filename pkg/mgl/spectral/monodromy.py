"""
Monodromy Solver Module
General-N spectra through 2x2 transfer matrices.

The state (u, v) = (f, df/dt) in the F-coordinate t = F_nu(x) is carried across
each inter-atom segment by the flow of u'' = -b^2 u and across each atom by the
jump map obtained from the two atom equations,

    v+ = v- - alpha b^2 u-,    u+ = u- + alpha v+.

An eigenfunction is a state fixed by the product M(b) over one period, so
-b^2 is an eigenvalue exactly when tr M(b) = 2 (det M = 1).

Scans and fixed-vector computations use the balanced state (u, v / b), in which
every segment propagator is a rotation.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from mgl.core.config import get_settings
from mgl.core.errors import ConvergenceError, DomainError, InconsistentRootError
from mgl.spectral.calculus import (
    PiecewiseSine,
    SinePiece,
    eigen_residual,
    inner_product,
    norm,
)
from mgl.spectral.closed_form import EigenPair, closed_form_family, family_index
from mgl.spectral.measure import (
    Atom,
    ContinuousPart,
    LebesgueCdf,
    MeasureSpec,
    PiecewiseLinearCdf,
)
from mgl.spectral.roots import locate_extremum, refine_bracket, sign_change_brackets, touching_extrema

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
HALF_PI = 0.5 * math.pi
_EPS = float(np.finfo(float).eps)
_SPACING_TOL = 1e-12


@dataclass(frozen=True)
class Transfer2x2:
    """Real 2x2 matrix [[m11, m12], [m21, m22]] acting on (value, derivative)."""

    m11: float
    m12: float
    m21: float
    m22: float

    @classmethod
    def identity(cls) -> "Transfer2x2":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    def __matmul__(self, other: "Transfer2x2") -> "Transfer2x2":
        return Transfer2x2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def apply(self, u: float, v: float) -> tuple[float, float]:
        return self.m11 * u + self.m12 * v, self.m21 * u + self.m22 * v

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])


class ScanOptions(BaseModel):
    """Overrides for one ``find_spectrum`` call; None falls back to the settings."""

    model_config = ConfigDict(frozen=True)

    step: Optional[float] = Field(default=None, gt=0)
    tol: Optional[float] = Field(default=None, gt=0)
    attach_eigenfunctions: bool = True


class SpectrumResult(BaseModel):
    """
    Eigenpairs with |b| <= b_max sorted by |lambda|, plus scan metadata.

    ``oscillation_count`` is the exact number of eigenvalues up to b_max that
    the scan was checked against; ``expected_count`` is the one-term Weyl
    estimate and ``weyl_ok`` only flags a gross departure from it.
    """

    model_config = ConfigDict(frozen=True)

    pairs: tuple[EigenPair, ...]
    b_max: float
    step: float
    refinements: int
    expected_count: float
    weyl_ok: bool
    oscillation_count: int

    @property
    def roots(self) -> np.ndarray:
        """Distinct non-negative b-roots in increasing order."""
        return np.array(sorted({abs(p.b) for p in self.pairs}))

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues repeated according to multiplicity, closest to 0 first."""
        return np.array([p.eigenvalue for p in self.pairs])

    @property
    def count(self) -> int:
        return len(self.pairs)


# ==================== Transfer matrices ====================


def segment_propagator(b: float, dF: float) -> Transfer2x2:
    """
    Flow of u'' = -b^2 u over an F-length dF.

    Returns:
        [[cos(b dF), sin(b dF)/b], [-b sin(b dF), cos(b dF)]], which is
        [[1, dF], [0, 1]] at b = 0
    """
    if dF < 0:
        raise DomainError(f"segment length must be non-negative, got {dF}")
    theta = b * dF
    c = math.cos(theta)
    s = math.sin(theta)
    sinc = dF * float(np.sinc(theta / math.pi))
    return Transfer2x2(c, sinc, -b * s, c)


def atom_jump(b: float, alpha: float) -> Transfer2x2:
    """Left-limit state to right-limit state across an atom of weight alpha."""
    if alpha <= 0:
        raise DomainError(f"atom weight must be positive, got {alpha}")
    return Transfer2x2(1.0 - alpha * alpha * b * b, alpha, -alpha * b * b, 1.0)


def _require_canonical(spec: MeasureSpec) -> None:
    if not spec.is_canonical:
        raise DomainError("monodromy needs the canonical form (last atom at 1)")


def monodromy(spec: MeasureSpec, b: float) -> Transfer2x2:
    """
    Period map J_N S_N ... J_1 S_1 from the state at 0+ to the state at 1+.

    Args:
        spec: Canonical measure
        b: Frequency

    Returns:
        Transfer2x2 with determinant 1
    """
    _require_canonical(spec)
    m = Transfer2x2.identity()
    for dF, alpha in zip(spec.segment_masses(), spec.weights):
        m = atom_jump(b, float(alpha)) @ segment_propagator(b, float(dF)) @ m
    return m


def discriminant(spec: MeasureSpec, b: float) -> float:
    """tr M(b) - 2; zero exactly when -b^2 is an eigenvalue."""
    return monodromy(spec, b).trace - 2.0


def balanced_monodromy(spec: MeasureSpec, b) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Entries of diag(1, 1/b) M(b) diag(1, b), vectorised over an array of b > 0.

    Segment factors are rotations by b dF; atom factors are
    [[1 - (alpha b)^2, alpha b], [-alpha b, 1]].
    """
    _require_canonical(spec)
    b = np.asarray(b, dtype=float)
    m11 = np.ones_like(b)
    m12 = np.zeros_like(b)
    m21 = np.zeros_like(b)
    m22 = np.ones_like(b)

    for dF, alpha in zip(spec.segment_masses(), spec.weights):
        c = np.cos(b * dF)
        s = np.sin(b * dF)
        m11, m12, m21, m22 = (
            c * m11 + s * m21,
            c * m12 + s * m22,
            -s * m11 + c * m21,
            -s * m12 + c * m22,
        )
        ab = alpha * b
        m11, m12, m21, m22 = (
            (1.0 - ab * ab) * m11 + ab * m21,
            (1.0 - ab * ab) * m12 + ab * m22,
            -ab * m11 + m21,
            -ab * m12 + m22,
        )
    return m11, m12, m21, m22


def _balanced_matrix(spec: MeasureSpec, b: float) -> np.ndarray:
    m11, m12, m21, m22 = balanced_monodromy(spec, np.array([b]))
    return np.array([[m11[0], m12[0]], [m21[0], m22[0]]])


def balanced_discriminant(m11, m12, m21, m22):
    """
    tr M - 2 from balanced entries.

    Where M is within 1 of the identity the value is taken as -det(M - I),
    whose rounding error shrinks with |M - I| instead of staying at the
    rounding level of the trace.
    """
    e11 = m11 - 1.0
    e22 = m22 - 1.0
    near = np.maximum(np.maximum(np.abs(e11), np.abs(e22)), np.maximum(np.abs(m12), np.abs(m21))) < 1.0
    return np.where(near, m12 * m21 - e11 * e22, e11 + e22)


def _disc(spec: MeasureSpec, b: float) -> float:
    return float(balanced_discriminant(*balanced_monodromy(spec, np.array([b])))[0])


def _roundoff_bound(spec: MeasureSpec, b: float, distance: float) -> float:
    """Rounding level of the discriminant at b when |M - I| is about ``distance``."""
    growth = float(np.prod(1.0 + (spec.weights * b) ** 2))
    noise = 16.0 * _EPS * growth
    return noise * max(distance, noise)


def _turn(u0: float, w0: float, u1: float, w1: float) -> float:
    """Angle swept from (u0, w0) to (u1, w1) by a map that turns forward by less than pi."""
    return (math.atan2(u1, w1) - math.atan2(u0, w0) + HALF_PI) % TWO_PI - HALF_PI


def oscillation_count(spec: MeasureSpec, b: float) -> int:
    """
    Number of frequencies in (0, b) at which the period map sends (0, 1) to a multiple of (0, 1).

    The Pruefer angle of the balanced state started at (0, 1) turns by b dF on
    each segment; the kick and the shear of an atom each turn it forward by
    less than pi, so the count is floor(angle / pi).
    """
    _require_canonical(spec)
    if b <= 0:
        return 0
    angle = 0.0
    u, w = 0.0, 1.0
    for dF, alpha in zip(spec.segment_masses(), spec.weights):
        theta = b * float(dF)
        angle += theta
        c, s = math.cos(theta), math.sin(theta)
        u, w = c * u + s * w, -s * u + c * w
        a = float(alpha) * b
        kicked = w - a * u
        angle += _turn(u, w, u, kicked)
        sheared = u + a * kicked
        angle += _turn(u, kicked, sheared, kicked)
        r = math.hypot(sheared, kicked)
        u, w = sheared / r, kicked / r
    return int(math.floor(angle / math.pi))


def spectrum_count(spec: MeasureSpec, b: float) -> int:
    """
    Eigenvalues -beta^2 with 0 <= beta <= b, counted with multiplicity.

    Each zero of m12 lies in the closure of a gap of the discriminant, and
    every second gap is one where tr M >= 2. From the oscillation count j
    and the sign of tr M(b) - 2 the count is 2 ceil(j / 2) inside such a gap
    and 1 + 2 floor(j / 2) elsewhere. Exact for b that is not itself a root.
    """
    if b <= 0:
        return 1
    j = oscillation_count(spec, b)
    if _disc(spec, b) > 0:
        return 2 * ((j + 1) // 2)
    return 1 + 2 * (j // 2)


# ==================== Eigenfunctions ====================


def _function_from_state(spec: MeasureSpec, b: float, state: np.ndarray) -> PiecewiseSine:
    """Piecewise sine generated by the balanced state (u, v/b) at 0+."""
    edges = spec.edges()
    u, w = float(state[0]), float(state[1])
    amplitudes, phases = [], []
    for j, (dF, alpha) in enumerate(zip(spec.segment_masses(), spec.weights)):
        amplitudes.append(math.hypot(u, w))
        phases.append((math.atan2(u, w) - b * edges[j]) % TWO_PI)
        c, s = math.cos(b * dF), math.sin(b * dF)
        u, w = c * u + s * w, -s * u + c * w
        ab = alpha * b
        u, w = (1.0 - ab * ab) * u + ab * w, -ab * u + w
    return PiecewiseSine(b=b, amplitudes=tuple(amplitudes), phases=tuple(phases), edges=tuple(edges))


def _canonical_sign(state: np.ndarray) -> np.ndarray:
    """Choose the sign of a state so that the first phase lies in [0, pi)."""
    if math.atan2(state[0], state[1]) < 0:
        return -state
    return state


def _orthogonal_state(
    spec: MeasureSpec, b: float, m: np.ndarray, partner: PiecewiseSine, tol: float
) -> Optional[np.ndarray]:
    """Unit state at b whose function is eta-orthogonal to ``partner``, if it is fixed by m within tol."""
    overlaps = np.array([inner_product(_function_from_state(spec, b, e), partner, spec) for e in np.eye(2)])
    size = float(np.linalg.norm(overlaps))
    if size == 0.0:
        return None
    state = np.array([-overlaps[1], overlaps[0]]) / size
    if float(np.linalg.norm((m - np.eye(2)) @ state)) > tol:
        return None
    return state


def assemble_eigenfunction(
    spec: MeasureSpec,
    b: float,
    multiplicity: Optional[int] = None,
    partner: Optional[PiecewiseSine] = None,
) -> list[PiecewiseSine]:
    """
    Eigenfunctions for a root b of the discriminant.

    Args:
        spec: Canonical measure
        b: Non-negative root
        multiplicity: 1 or 2 when the scan already classified the root; None
            decides from the singular values of M(b) - I
        partner: Eigenfunction of a neighbouring root of the same cluster; the
            simple eigenfunction at b is then chosen eta-orthogonal to it

    Returns:
        One eta-normalised function, or two eta-orthonormal functions when the
        whole state space is fixed by M(b)

    Raises:
        InconsistentRootError: If M(b) has fewer fixed vectors than requested
    """
    _require_canonical(spec)
    settings = get_settings()
    if multiplicity not in (None, 1, 2):
        raise DomainError(f"multiplicity must be 1 or 2, got {multiplicity}")

    if b == 0.0:
        return [PiecewiseSine.constant(1.0 / math.sqrt(spec.total_mass), spec.edges())]

    b = abs(b)
    m = _balanced_matrix(spec, b)
    scale = max(1.0, float(np.abs(m).max()))
    _, sigma, vt = np.linalg.svd(m - np.eye(2))

    if sigma[-1] > settings.fixed_vector_tol * scale:
        raise InconsistentRootError(b, float(sigma[-1] / scale))

    if multiplicity is None:
        multiplicity = 1 if sigma[0] > settings.double_root_tol * scale else 2

    if multiplicity == 1:
        state = None
        if partner is not None:
            state = _orthogonal_state(spec, b, m, partner, settings.double_root_tol * scale)
            if state is None:
                logger.debug("no fixed state orthogonal to the neighbouring root at b = %.15g", b)
        state = _canonical_sign(vt[-1] if state is None else state)
        f = _function_from_state(spec, b, state)
        return [f.scaled(1.0 / norm(f, spec))]

    if sigma[0] > settings.fixed_vector_tol * scale:
        raise InconsistentRootError(b, float(sigma[0] / scale))

    basis = [_function_from_state(spec, b, e) for e in np.eye(2)]
    gram = np.array([[inner_product(f, g, spec) for g in basis] for f in basis])
    weights, vectors = np.linalg.eigh(gram)
    functions = []
    for i in range(2):
        state = _canonical_sign(vectors[:, i] / math.sqrt(weights[i]))
        functions.append(_function_from_state(spec, b, state))
    return functions


# ==================== Spectrum scan ====================


def scan_step(spec: MeasureSpec) -> float:
    """pi * min(min dF, min alpha) / divisor, capped."""
    settings = get_settings()
    smallest = min(float(spec.segment_masses().min()), float(spec.weights.min()))
    return min(settings.scan_step_cap, math.pi * smallest / settings.scan_step_divisor)


def _gap_point(spec: MeasureSpec, lo: float, hi: float, xtol: float) -> Optional[float]:
    """Zero of m12 (else of m21) in [lo, hi]; either lies in the closure of a gap."""
    for entry in (1, 2):
        def off_diagonal(b: float) -> float:
            return float(balanced_monodromy(spec, np.array([b]))[entry][0])

        if off_diagonal(lo) * off_diagonal(hi) <= 0:
            return refine_bracket(off_diagonal, lo, hi, xtol)
    return None


def _roots_near_maximum(spec: MeasureSpec, lo: float, hi: float, xtol: float) -> list[tuple[float, int]]:
    """
    Roots around a sampled maximum of the discriminant that stays below zero.

    The scan cannot see a gap narrower than its step. Inside such a gap sits
    a zero of an off-diagonal entry; there the discriminant is either within
    rounding of zero (a tangential double root), positive (two simple roots
    on either side) or negative (no root).
    """
    settings = get_settings()
    b_root = _gap_point(spec, lo, hi, xtol)
    if b_root is None:
        b_root = locate_extremum(lambda b: _disc(spec, b), lo, hi, -1.0)
        if b_root is None:
            return []

    m = _balanced_matrix(spec, b_root)
    scale = max(1.0, float(np.abs(m).max()))
    distance = float(np.abs(m - np.eye(2)).max())
    value = _disc(spec, b_root)

    if distance <= settings.double_root_tol * scale or abs(value) <= _roundoff_bound(spec, b_root, distance):
        return [(b_root, 2)]
    if value > 0:
        def disc(b: float) -> float:
            return _disc(spec, b)

        return [(refine_bracket(disc, lo, b_root, xtol), 1), (refine_bracket(disc, b_root, hi, xtol), 1)]
    return []


def _scan_roots(spec: MeasureSpec, b_max: float, step: float, xtol: float) -> tuple[list[tuple[float, int]], int, int]:
    """Positive roots up to b_max with multiplicities, the number of grid points and of refinements."""
    n_points = max(2, int(math.ceil(b_max / step)))
    grid = np.linspace(b_max / n_points, b_max, n_points)
    values = balanced_discriminant(*balanced_monodromy(spec, grid))
    logger.info("scanning discriminant on %d points (step %.3g)", n_points, b_max / n_points)

    def disc(b: float) -> float:
        return _disc(spec, b)

    roots: list[tuple[float, int]] = []
    for i in sign_change_brackets(values):
        roots.append((refine_bracket(disc, float(grid[i]), float(grid[i + 1]), xtol), 1))

    for i in touching_extrema(values):
        lo, hi = float(grid[i - 1]), float(grid[i + 1])
        if values[i] < 0:
            found = _roots_near_maximum(spec, lo, hi, xtol)
        else:
            # band narrower than the step
            b_star = locate_extremum(disc, lo, hi, 1.0)
            found = []
            if b_star is not None and disc(b_star) < 0:
                found = [(refine_bracket(disc, lo, b_star, xtol), 1), (refine_bracket(disc, b_star, hi, xtol), 1)]
        if not found:
            logger.debug("no root near the extremum at b = %.15g", grid[i])
        roots.extend(found)

    refinements = len(roots)
    roots.sort()
    deduped: list[tuple[float, int]] = []
    for b, mult in roots:
        if deduped and abs(b - deduped[-1][0]) <= 10 * xtol * max(1.0, b):
            continue
        deduped.append((b, mult))
    return deduped, n_points, refinements


def find_spectrum(spec: MeasureSpec, b_max: float, opts: Optional[ScanOptions] = None) -> SpectrumResult:
    """
    All eigenpairs with 0 <= b <= b_max.

    The discriminant is sampled on a uniform grid; sign changes are refined
    with Brent's method, and local extrema of |discriminant| that do not change
    sign are examined for close root pairs and tangential (double) roots. The
    number of roots found must match ``spectrum_count``; otherwise the scan is
    repeated at a quarter of the step.

    Args:
        spec: Canonical measure
        b_max: Largest frequency scanned
        opts: Scan step, root tolerance and whether to attach eigenfunctions

    Returns:
        SpectrumResult; b = 0 with the constant eigenfunction is always first

    Raises:
        ConvergenceError: If the count still disagrees after the configured rescans
    """
    _require_canonical(spec)
    if not b_max > 0:
        raise DomainError(f"b_max must be positive, got {b_max}")

    settings = get_settings()
    opts = opts or ScanOptions()
    step = opts.step or scan_step(spec)
    xtol = opts.tol or settings.root_xtol

    # a root within rounding of b_max may land on either side
    low_count = spectrum_count(spec, b_max * (1.0 - 1e-9))
    high_count = spectrum_count(spec, b_max * (1.0 + 1e-9))

    for _ in range(settings.scan_refinements + 1):
        roots, n_points, refinements = _scan_roots(spec, b_max, step, xtol)
        found = 1 + sum(mult for _, mult in roots)
        if low_count <= found <= high_count:
            break
        logger.warning(
            "scan with step %.3g found %d eigenvalues, the oscillation count gives %d; rescanning",
            b_max / n_points, found, high_count,
        )
        step /= 4
    else:
        raise ConvergenceError(
            f"discriminant scan found {found} eigenvalues with b <= {b_max:.6g}, "
            f"the oscillation count gives {high_count}"
        )

    family = closed_form_family(spec)
    if family is not None and any(mult == 2 for _, mult in roots):
        logger.warning("double root found for a closed-form family measure")

    pairs = _attach_eigenpairs(spec, [(0.0, 1)] + roots, opts.attach_eigenfunctions, family is not None)

    expected = 1.0 + b_max * float(spec.edges()[-1]) / math.pi
    slack = spec.n_atoms + settings.weyl_slack
    weyl_ok = abs(len(pairs) - expected) <= slack
    if not weyl_ok:
        logger.warning(
            "Weyl sanity check failed: %d roots found, about %.1f expected",
            len(pairs), expected,
        )
    logger.info("found %d eigenpairs with b <= %.6g", len(pairs), b_max)

    return SpectrumResult(
        pairs=tuple(pairs),
        b_max=b_max,
        step=b_max / n_points,
        refinements=refinements,
        expected_count=expected,
        weyl_ok=weyl_ok,
        oscillation_count=high_count,
    )


def _attach_eigenpairs(
    spec: MeasureSpec, roots: Sequence[tuple[float, int]], with_functions: bool, family_labels: bool
) -> list[EigenPair]:
    settings = get_settings()
    pairs = []
    rank = 0
    previous: Optional[tuple[float, int, PiecewiseSine]] = None
    for b, mult in roots:
        if with_functions:
            partner = None
            if previous is not None and previous[1] == 1 and mult == 1 and previous[0] > 0:
                if b - previous[0] <= settings.cluster_gap * max(1.0, b):
                    partner = previous[2]
            functions = assemble_eigenfunction(spec, b, mult, partner)
            previous = (b, mult, functions[-1])
        else:
            placeholder = PiecewiseSine(
                b=b, amplitudes=(0.0,) * spec.n_atoms, phases=(0.0,) * spec.n_atoms, edges=tuple(spec.edges())
            )
            functions = [placeholder] * mult

        k = family_index(spec, b) if family_labels else None
        for fn in functions:
            if k is not None:
                pairs.append(EigenPair(k=k, b=b, fn=fn, multiplicity=mult, label="closed_form"))
            else:
                pairs.append(EigenPair(k=rank, b=b, fn=fn, multiplicity=mult, label="rank"))
            rank += 1
    return pairs


# ==================== Transformations ====================


def pullback_to_x(f: PiecewiseSine, cont: ContinuousPart) -> PiecewiseSine:
    """
    Express an F-coordinate function in the x-coordinate, f_x(x) = f(F_nu(x)).

    On a linear piece F = F_m + s_m (x - x_m) the segment sine becomes
    a_j sin(b s_m x + b (F_m - s_m x_m) + gamma_j).
    """
    if f.coordinate != "F":
        raise DomainError("function is already in the x-coordinate")
    if isinstance(cont, LebesgueCdf):
        return f
    if np.any(cont.slopes <= 0):
        raise DomainError("distribution function is not invertible")

    xs, fs, slopes = cont.xs, cont.fs, cont.slopes
    positions = np.asarray(cont.inverse(np.asarray(f.edges[1:])), dtype=float)
    breaks = np.unique(np.concatenate(([0.0], xs, positions)))

    pieces = []
    for left, right in zip(breaks[:-1], breaks[1:]):
        if right - left <= _SPACING_TOL:
            continue
        j = min(int(np.searchsorted(positions, right - _SPACING_TOL, side="left")), f.n_segments - 1)
        m = min(int(np.searchsorted(xs, right - _SPACING_TOL, side="left")) - 1, len(slopes) - 1)
        pieces.append(SinePiece(
            left=float(left),
            right=float(right),
            amplitude=f.amplitudes[j],
            frequency=f.b * float(slopes[m]),
            phase=f.phases[j] + f.b * float(fs[m] - slopes[m] * xs[m]),
        ))
    return f.model_copy(update={"coordinate": "x", "pieces": tuple(pieces)})


def _require_equal_spacing(spec: MeasureSpec, what: str) -> None:
    n = spec.n_atoms
    expected = np.arange(1, n + 1) / n
    if not np.allclose(spec.edges()[1:], expected, atol=_SPACING_TOL, rtol=0):
        raise DomainError(f"{what} needs atoms at F-positions i/N")


def rotate_eigenfunction(f: PiecewiseSine, spec: MeasureSpec, r: int) -> tuple[PiecewiseSine, MeasureSpec]:
    """
    Cyclic relabelling of an eigenfunction for equally spaced atoms.

    Segment i of f_r takes segment s(i) of f, with s(i) = N - r + 1 + i for
    i < r and s(i) = i - r + 1 otherwise, shifted to its new position; the atom
    at z_i of the returned measure carries alpha_{s(i)}. With equal weights the
    returned measure equals ``spec``.

    Raises:
        DomainError: If the atoms are not equally spaced or r is not in 2..N
    """
    _require_canonical(spec)
    _require_equal_spacing(spec, "rotation")
    n = spec.n_atoms
    if not 2 <= r <= n:
        raise DomainError(f"rotation index must lie in 2..{n}, got {r}")

    amplitudes, phases, atoms = [], [], []
    for i in range(1, n + 1):
        if i < r:
            source = n - r + 1 + i
            shift = (n - r + 1) / n
        else:
            source = i - r + 1
            shift = -(r - 1) / n
        amplitudes.append(f.amplitudes[source - 1])
        phases.append((f.phases[source - 1] + f.b * shift) % TWO_PI)
        atoms.append((spec.atoms[i - 1].z, spec.atoms[source - 1].alpha))

    rotated = f.model_copy(update={"amplitudes": tuple(amplitudes), "phases": tuple(phases)})
    return rotated, spec.with_atoms(atoms)


def concatenate_measure(spec_p: MeasureSpec, k: int) -> MeasureSpec:
    """
    Lebesgue measure plus atoms alpha_{(i-1) mod p + 1} / k at i/N, N = p k.

    ``spec_p`` must be Lebesgue measure plus atoms at i/p.
    """
    if k < 1:
        raise DomainError(f"concatenation factor must be positive, got {k}")
    if not isinstance(spec_p.continuous, LebesgueCdf):
        raise DomainError("concatenation needs a Lebesgue continuous part")
    _require_equal_spacing(spec_p, "concatenation")

    p = spec_p.n_atoms
    n = p * k
    atoms = tuple(
        Atom(z=1.0 if i == n else i / n, alpha=spec_p.atoms[(i - 1) % p].alpha / k)
        for i in range(1, n + 1)
    )
    return MeasureSpec(atoms=atoms)


def concatenate_eigenfunction(f_p: PiecewiseSine, k: int) -> PiecewiseSine:
    """f^(N)(x) = f^(p)(k x mod 1) on the segments of the concatenated measure."""
    if k < 1:
        raise DomainError(f"concatenation factor must be positive, got {k}")
    p = f_p.n_segments
    n = p * k
    amplitudes, phases = [], []
    for j in range(n):
        copy, i = divmod(j, p)
        amplitudes.append(f_p.amplitudes[i])
        phases.append((f_p.phases[i] - f_p.b * copy) % TWO_PI)
    edges = tuple(1.0 if j == n else j / n for j in range(n + 1))
    return PiecewiseSine(b=f_p.b * k, amplitudes=tuple(amplitudes), phases=tuple(phases), edges=edges)


class ConcatenationReport(BaseModel):
    """Outcome of ``concatenation_check``."""

    model_config = ConfigDict(frozen=True)

    k: int
    p: int
    scaled_roots: tuple[float, ...]
    max_root_deviation: float
    max_pointwise_deviation: float
    max_eigen_residual: float
    passed: bool


def concatenation_check(spec_p: MeasureSpec, k: int, b_max: float, tol: float = 1e-8) -> ConcatenationReport:
    """
    Verify that k times every root of ``spec_p`` up to b_max / k is a root of the
    concatenated measure, and that the concatenated eigenfunctions agree with
    f(k x mod 1) and satisfy the eigen-equation.
    """
    spec_n = concatenate_measure(spec_p, k)
    small = find_spectrum(spec_p, b_max / k)
    large = find_spectrum(spec_n, b_max + 1.0, ScanOptions(attach_eigenfunctions=False))
    large_roots = large.roots

    root_dev = 0.0
    point_dev = 0.0
    residual = 0.0
    xs = np.linspace(0.0, 1.0, 1002)[1:-1]
    folded = k * xs - np.ceil(k * xs) + 1.0
    for pair in small.pairs:
        target = k * abs(pair.b)
        nearest = float(np.min(np.abs(large_roots - target)))
        root_dev = max(root_dev, nearest / max(1.0, target))

        f_n = concatenate_eigenfunction(pair.fn, k)
        point_dev = max(point_dev, float(np.max(np.abs(f_n(xs) - pair.fn(folded)))))
        residual = max(residual, eigen_residual(f_n, f_n.eigenvalue, spec_n))

    passed = root_dev <= tol and point_dev <= tol and residual <= 1e-9
    if not passed:
        logger.warning("concatenation check failed for k=%d (roots %.3e, pointwise %.3e, residual %.3e)",
                       k, root_dev, point_dev, residual)
    return ConcatenationReport(
        k=k,
        p=spec_p.n_atoms,
        scaled_roots=tuple(k * abs(p.b) for p in small.pairs),
        max_root_deviation=root_dev,
        max_pointwise_deviation=point_dev,
        max_eigen_residual=residual,
        passed=passed,
    )

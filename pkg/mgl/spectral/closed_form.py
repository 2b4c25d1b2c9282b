"""
Closed-Form Spectra Module
Exact spectra of Lebesgue measure plus one atom, or plus two equal atoms at 1/2 and 1,
from their transcendental tangent equations.

Every equation here has the shape tan(c) = intercept + slope * c on (-pi/2, pi/2).
It is solved through g(c) = sin(c) - (intercept + slope * c) cos(c), which has the
same interior roots, no poles, and g(-pi/2) = -1, g(pi/2) = 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, computed_field

from mgl.core.config import get_settings
from mgl.core.errors import DomainError
from mgl.spectral.calculus import PiecewiseSine
from mgl.spectral.measure import MeasureSpec
from mgl.spectral.roots import (
    locate_extremum,
    polish_newton,
    refine_bracket,
    sign_change_brackets,
    touching_extrema,
)

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi
# 2 arctan(1/2) - 2 arctan(2), the offset of the second special-weight family
DOUBLE_PRIME_OFFSET = 2 * math.atan(0.5) - 2 * math.atan(2.0)


@dataclass(frozen=True)
class TanLineProblem:
    """tan(c) = -2 c beta + sign beta pi/2 + 2 pi beta k + sign."""

    beta: float
    k: int
    sign: int = 1

    def __post_init__(self):
        if self.beta == 0:
            raise DomainError("beta must be non-zero")
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def slope(self) -> float:
        return -2.0 * self.beta

    @property
    def intercept(self) -> float:
        return self.sign * self.beta * HALF_PI + TWO_PI * self.beta * self.k + self.sign

    def rhs(self, c: float) -> float:
        return self.intercept + self.slope * c


class TanLineRoot(BaseModel):
    """A solution (c, xi) of the one-atom tangent-line system."""

    model_config = ConfigDict(frozen=True)

    c: float
    xi: float
    tangent: bool = False


class EigenPair(BaseModel):
    """Eigenvalue -b^2 with its eigenfunction; ``k`` is a closed-form index or a rank."""

    model_config = ConfigDict(frozen=True)

    k: int
    b: float
    fn: PiecewiseSine
    multiplicity: int = 1
    label: Literal["closed_form", "rank"] = "closed_form"

    @computed_field
    @property
    def eigenvalue(self) -> float:
        return -self.b * self.b


class SpecialAlphaClass(BaseModel):
    """Outcome of ``special_alpha_class``."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    family: Optional[Literal["alpha_prime", "alpha_double_prime"]] = None
    m: Optional[int] = None
    eigenvalue: Optional[float] = None
    fn: Optional[PiecewiseSine] = None
    family_k: Optional[int] = None

    @property
    def matched(self) -> bool:
        return self.family is not None


# ==================== Tangent equations ====================


def _tan_line_function(slope: float, intercept: float):
    def g(c: float) -> float:
        return math.sin(c) - (intercept + slope * c) * math.cos(c)

    return g


def solve_tan_equation(slope: float, intercept: float) -> list[tuple[float, bool]]:
    """
    All roots of tan(c) = intercept + slope * c in (-pi/2, pi/2).

    A decreasing right-hand side (slope < 0) has exactly one root, found from
    the whole-interval bracket. Otherwise the interval is scanned for sign
    changes and for touching extrema (double roots).

    Returns:
        List of (c, tangent) with tangent True when |d/dc (tan c - rhs)| is
        below the configured tangency threshold
    """
    settings = get_settings()
    g = _tan_line_function(slope, intercept)

    def h(c: float) -> float:
        return math.tan(c) - (intercept + slope * c)

    def dh(c: float) -> float:
        return 1.0 / math.cos(c) ** 2 - slope

    candidates: list[tuple[float, float, float]] = []

    if slope < 0:
        candidates.append((-HALF_PI, HALF_PI, refine_bracket(g, -HALF_PI, HALF_PI, settings.root_xtol)))
    else:
        grid = np.linspace(-HALF_PI, HALF_PI, settings.tan_scan_intervals + 1)
        values = np.sin(grid) - (intercept + slope * grid) * np.cos(grid)
        for i in sign_change_brackets(values):
            lo, hi = float(grid[i]), float(grid[i + 1])
            candidates.append((lo, hi, refine_bracket(g, lo, hi, settings.root_xtol)))
        for i in touching_extrema(values):
            lo, hi = float(grid[i - 1]), float(grid[i + 1])
            c = locate_extremum(g, lo, hi, float(np.sign(values[i])))
            if c is not None and abs(g(c)) <= 1e-12:
                candidates.append((lo, hi, c))

    roots = []
    for lo, hi, c in candidates:
        if abs(c) < HALF_PI:
            c = polish_newton(h, dh, c, max(lo, -HALF_PI + 1e-15), min(hi, HALF_PI - 1e-15),
                              settings.newton_steps)
        tangent = abs(dh(c)) < settings.tangency_threshold
        if tangent:
            logger.warning("near-tangent root of tan-line equation at c=%.15g", c)
        roots.append((c, tangent))

    roots.sort()
    return roots


def solve_tan_line(problem: TanLineProblem) -> list[TanLineRoot]:
    """
    Solutions (c, xi) of the one-atom tangent-line system for a given (beta, k, sign).

    For beta > 0 there is exactly one c in (-pi/2, pi/2); for beta < 0 there
    are at most three. xi = (tan(c) - sign) / beta.
    """
    roots = solve_tan_equation(problem.slope, problem.intercept)
    return [
        TanLineRoot(c=c, xi=(math.tan(c) - problem.sign) / problem.beta, tangent=tangent)
        for c, tangent in roots
    ]


def tan_line_residual(beta: float, xi: float, c: float) -> float:
    """
    Largest residual of
    beta xi cos(c) = sin(c) - sin(xi + c) and
    beta xi^2 sin(xi + c) = xi cos(xi + c) - xi cos(c).
    """
    first = beta * xi * math.cos(c) - (math.sin(c) - math.sin(xi + c))
    second = beta * xi * xi * math.sin(xi + c) - (xi * math.cos(xi + c) - xi * math.cos(c))
    return max(abs(first), abs(second))


# ==================== Eigenpairs ====================


def one_atom_phase(alpha: float, k: int) -> float:
    """gamma^(k,1): the root of tan(g) = -2 g alpha + alpha pi/2 + 2 pi alpha k + 1."""
    if k == 0:
        return math.pi / 4
    (c, _), = solve_tan_equation(-2.0 * alpha, alpha * HALF_PI + TWO_PI * alpha * k + 1.0)
    return c


def two_atom_phase(alpha: float, k: int) -> float:
    """gamma_1^(k,2): the root of tan(g) = 1 - 4 alpha g + alpha pi + 2 pi alpha k."""
    if k == 0:
        return math.pi / 4
    (c, _), = solve_tan_equation(-4.0 * alpha, 1.0 + alpha * math.pi + TWO_PI * alpha * k)
    return c


def eigenpair_one_atom(alpha: float, k: int) -> EigenPair:
    """
    k-th eigenpair of Lebesgue measure plus alpha * delta_1.

    Args:
        alpha: Atom weight (> 0)
        k: Closed-form index; k = 0 is the constant eigenfunction

    Returns:
        EigenPair with fn(x) = sin(b x + gamma), b = -2 gamma + pi/2 + 2 pi k
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")

    gamma = one_atom_phase(alpha, k)
    b = 0.0 if k == 0 else -2.0 * gamma + HALF_PI + TWO_PI * k
    fn = PiecewiseSine(b=b, amplitudes=(1.0,), phases=(gamma,), edges=(0.0, 1.0))
    return EigenPair(k=k, b=b, fn=fn)


def eigenpair_two_atoms(alpha: float, k: int) -> EigenPair:
    """
    k-th eigenpair of Lebesgue measure plus alpha (delta_{1/2} + delta_1).

    b = -4 gamma_1 + pi + 2 pi k and gamma_2 = -b - gamma_1 + pi/2, reported
    modulo 2 pi in [0, 2 pi).
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")

    gamma1 = two_atom_phase(alpha, k)
    if k == 0:
        b = 0.0
        gamma2 = gamma1
    else:
        b = -4.0 * gamma1 + math.pi + TWO_PI * k
        gamma2 = (-b - gamma1 + HALF_PI) % TWO_PI

    fn = PiecewiseSine(b=b, amplitudes=(1.0, 1.0), phases=(gamma1, gamma2), edges=(0.0, 0.5, 1.0))
    return EigenPair(k=k, b=b, fn=fn)


def closed_form_spectrum(alpha: float, n_atoms: int, k_min: int, k_max: int) -> list[EigenPair]:
    """
    EigenPairs of the one- or two-atom family for k in [k_min, k_max], sorted by |lambda|.
    """
    if n_atoms == 1:
        solver = eigenpair_one_atom
    elif n_atoms == 2:
        solver = eigenpair_two_atoms
    else:
        raise DomainError(f"closed forms exist for one or two atoms, not {n_atoms}")

    pairs = [solver(alpha, k) for k in range(k_min, k_max + 1)]
    return sorted(pairs, key=lambda p: (abs(p.b), p.k))


def special_alpha_class(alpha: float, tol: float = 1e-12) -> SpecialAlphaClass:
    """
    Classify alpha against the special two-atom weights
    alpha' = 1/(pi + 2 pi m), m >= 0, and
    alpha'' = 1/(2 arctan(1/2) - 2 arctan(2) + 2 pi m), m >= 1.

    On a match, -1/alpha^2 is a simple eigenvalue with an explicit eigenfunction,
    equal to f^(-m-1,2) for alpha' and to f^(m,2) for alpha''.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")

    inverse = 1.0 / alpha
    edges = (0.0, 0.5, 1.0)

    m = round((inverse - math.pi) / TWO_PI)
    if m >= 0:
        candidate = 1.0 / (math.pi + TWO_PI * m)
        if abs(candidate - alpha) <= tol:
            b = -inverse
            fn = PiecewiseSine(b=b, amplitudes=(1.0, 1.0), phases=(0.0, 3 * HALF_PI), edges=edges)
            return SpecialAlphaClass(alpha=alpha, family="alpha_prime", m=m,
                                     eigenvalue=-inverse * inverse, fn=fn, family_k=-m - 1)

    m = round((inverse - DOUBLE_PRIME_OFFSET) / TWO_PI)
    if m >= 1:
        candidate = 1.0 / (DOUBLE_PRIME_OFFSET + TWO_PI * m)
        if abs(candidate - alpha) <= tol:
            b = inverse
            gamma1 = math.atan(2.0)
            gamma2 = (math.atan(2.0) - 2 * math.atan(0.5) + HALF_PI) % TWO_PI
            fn = PiecewiseSine(b=b, amplitudes=(1.0, 1.0), phases=(gamma1, gamma2), edges=edges)
            return SpecialAlphaClass(alpha=alpha, family="alpha_double_prime", m=m,
                                     eigenvalue=-inverse * inverse, fn=fn, family_k=m)

    return SpecialAlphaClass(alpha=alpha)


# ==================== Family detection ====================


def closed_form_family(spec: MeasureSpec) -> Optional[tuple[int, float]]:
    """
    (n_atoms, alpha) when the canonical measure has the segment structure of a
    closed-form family, else None. Only F-values matter, so any continuous part
    with F(1) = 1 (and F(1/2-atom) = 1/2 for two atoms) qualifies.
    """
    if not spec.is_canonical:
        return None
    edges = spec.edges()
    weights = spec.weights
    if spec.n_atoms == 1 and abs(edges[-1] - 1.0) <= 1e-14:
        return 1, float(weights[0])
    if (
        spec.n_atoms == 2
        and np.allclose(edges, (0.0, 0.5, 1.0), atol=1e-14, rtol=0)
        and weights[0] == weights[1]
    ):
        return 2, float(weights[0])
    return None


def family_index(spec: MeasureSpec, b: float, rtol: float = 1e-8) -> Optional[int]:
    """
    Closed-form index k of a non-negative root b for the closed-form families.

    The closed-form frequency may be b or -b (negative-k branches).
    """
    family = closed_form_family(spec)
    if family is None:
        return None
    if b == 0.0:
        return 0

    n_atoms, alpha = family
    solver = eigenpair_one_atom if n_atoms == 1 else eigenpair_two_atoms
    # b^(k,N) lies within 2 pi (N = 1) or 2 pi + pi (N = 2) of 2 pi k
    best: Optional[tuple[float, int]] = None
    for target in (b, -b):
        centre = round(target / TWO_PI)
        for k in range(centre - 1, centre + 2):
            if k == 0:
                continue
            gap = abs(solver(alpha, k).b - target)
            if best is None or gap < best[0]:
                best = (gap, k)

    if best is not None and best[0] <= rtol * max(1.0, abs(b)):
        return best[1]
    return None

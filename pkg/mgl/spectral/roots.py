"""
Root refinement helpers shared by the closed-form and monodromy solvers.

Brackets are refined with Brent's method; an optional safeguarded Newton polish
keeps every iterate inside the bracket and only accepts steps that reduce the
residual.
"""

from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

_MIN_RTOL = 4 * np.finfo(float).eps


def refine_bracket(func: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-14) -> float:
    """
    Refine a sign-change bracket [lo, hi] of ``func``.

    Args:
        func: Continuous scalar function with func(lo) * func(hi) <= 0
        lo: Left end of the bracket
        hi: Right end of the bracket
        xtol: Absolute tolerance on the root

    Returns:
        Root inside [lo, hi]
    """
    f_lo = func(lo)
    if f_lo == 0.0:
        return lo
    f_hi = func(hi)
    if f_hi == 0.0:
        return hi
    return float(brentq(func, lo, hi, xtol=xtol, rtol=_MIN_RTOL, maxiter=500))


def polish_newton(
    func: Callable[[float], float],
    dfunc: Callable[[float], float],
    x: float,
    lo: float,
    hi: float,
    steps: int = 5,
) -> float:
    """
    Safeguarded Newton steps from ``x``.

    A step is taken only if it stays in [lo, hi] and lowers |func|.
    """
    fx = func(x)
    for _ in range(steps):
        if fx == 0.0:
            break
        d = dfunc(x)
        if d == 0.0 or not np.isfinite(d):
            break
        candidate = x - fx / d
        if not lo <= candidate <= hi:
            break
        f_candidate = func(candidate)
        if not abs(f_candidate) < abs(fx):
            break
        x, fx = candidate, f_candidate
    return x


def sign_change_brackets(values: np.ndarray) -> np.ndarray:
    """Indices i with a sign change (or exact zero) between samples i and i+1."""
    values = np.asarray(values)
    left, right = values[:-1], values[1:]
    return np.nonzero((left * right < 0) | ((left == 0) & (right != 0)))[0]


def touching_extrema(values: np.ndarray) -> np.ndarray:
    """Interior sample indices that are local extrema of |values| without a sign change around them."""
    values = np.asarray(values)
    mid = values[1:-1]
    lower = np.abs(mid) <= np.abs(values[:-2])
    upper = np.abs(mid) <= np.abs(values[2:])
    same_sign = (np.sign(values[:-2]) == np.sign(mid)) & (np.sign(values[2:]) == np.sign(mid))
    return np.nonzero(lower & upper & same_sign & (mid != 0))[0] + 1


def locate_extremum(
    func: Callable[[float], float], lo: float, hi: float, sign: float, xatol: float = 1e-14
) -> Optional[float]:
    """Point in [lo, hi] where sign * func is smallest (bounded scalar minimisation)."""
    result = minimize_scalar(lambda x: sign * func(x), bounds=(lo, hi), method="bounded",
                             options={"xatol": xatol, "maxiter": 500})
    if not result.success:
        return None
    return float(result.x)

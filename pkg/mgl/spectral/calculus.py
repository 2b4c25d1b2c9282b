"""
Operator Calculus Module
Closed-form action of the eta-derivative, its adjoint and the eta-Laplacian on
piecewise-sine functions, together with the L2(eta) inner product and the energy form.

All interior computations happen in the F-coordinate t = F_nu(x): a segment
function a_j sin(b F_nu(x) + gamma_j) is a plain sine in t, the nu-derivative is
the t-derivative, and integration against nu is integration in t. Continuous-part
integrals use exact product-to-sum antiderivatives; there is no quadrature here.
"""

import logging
import math
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from mgl.core.errors import DomainError
from mgl.spectral.measure import MeasureSpec

logger = logging.getLogger(__name__)

_EDGE_TOL = 1e-12


class SinePiece(BaseModel):
    """amplitude * sin(frequency * x + phase) on (left, right]."""

    model_config = ConfigDict(frozen=True)

    left: float
    right: float
    amplitude: float
    frequency: float
    phase: float


class PiecewiseSine(BaseModel):
    """
    Eigenfunction candidate a_j sin(b t + gamma_j) on the j-th inter-atom segment.

    ``edges`` are the segment boundaries in the F-coordinate,
    (0, F(z_1), ..., F(z_N)). Evaluation is left-continuous at every atom.
    A pullback to the x-coordinate carries explicit ``pieces`` with their own
    frequencies; those are used for evaluation and plotting only.
    """

    model_config = ConfigDict(frozen=True)

    b: float
    amplitudes: tuple[float, ...]
    phases: tuple[float, ...]
    edges: tuple[float, ...]
    coordinate: Literal["F", "x"] = "F"
    pieces: tuple[SinePiece, ...] = ()

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.amplitudes) != len(self.phases) or len(self.edges) != len(self.amplitudes) + 1:
            raise ValueError("need one amplitude and one phase per segment and N+1 edges")
        if self.coordinate == "x" and not self.pieces:
            raise ValueError("x-coordinate functions need explicit pieces")
        return self

    @classmethod
    def constant(cls, value: float, edges) -> "PiecewiseSine":
        """The constant function ``value`` written as b = 0 sines."""
        n = len(edges) - 1
        return cls(
            b=0.0,
            amplitudes=(float(value),) * n,
            phases=(math.pi / 2,) * n,
            edges=tuple(float(e) for e in edges),
        )

    @property
    def n_segments(self) -> int:
        return len(self.amplitudes)

    @property
    def eigenvalue(self) -> float:
        return -self.b * self.b

    def segment_index(self, t) -> np.ndarray:
        """Index of the (left-open, right-closed) segment containing t."""
        edges = np.asarray(self.edges)
        idx = np.searchsorted(edges, t, side="left") - 1
        return np.clip(idx, 0, self.n_segments - 1)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.coordinate == "x":
            rights = np.array([p.right for p in self.pieces])
            idx = np.clip(np.searchsorted(rights, t, side="left"), 0, len(self.pieces) - 1)
            amp = np.array([p.amplitude for p in self.pieces])[idx]
            freq = np.array([p.frequency for p in self.pieces])[idx]
            phase = np.array([p.phase for p in self.pieces])[idx]
            return amp * np.sin(freq * t + phase)

        idx = self.segment_index(t)
        amp = np.asarray(self.amplitudes)[idx]
        phase = np.asarray(self.phases)[idx]
        return amp * np.sin(self.b * t + phase)

    def left_values(self) -> np.ndarray:
        """f(z_j), the value at each atom (taken from segment j)."""
        a = np.asarray(self.amplitudes)
        g = np.asarray(self.phases)
        e = np.asarray(self.edges)
        return a * np.sin(self.b * e[1:] + g)

    def right_values(self) -> np.ndarray:
        """f(z_j+), with the periodic wrap from z_N to the start of segment 1."""
        a = np.roll(np.asarray(self.amplitudes), -1)
        g = np.roll(np.asarray(self.phases), -1)
        e = np.asarray(self.edges)
        starts = e[1:].copy()
        starts[-1] = e[0]
        return a * np.sin(self.b * starts + g)

    def scaled(self, factor: float) -> "PiecewiseSine":
        """Return factor * f."""
        pieces = tuple(p.model_copy(update={"amplitude": p.amplitude * factor}) for p in self.pieces)
        return self.model_copy(
            update={"amplitudes": tuple(a * factor for a in self.amplitudes), "pieces": pieces}
        )


class TrigSegment(BaseModel):
    """Closed-form interior description on one segment."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["sine", "cosine", "constant"]
    coefficient: float
    phase: float = 0.0

    def value(self, b: float, t):
        if self.kind == "sine":
            return self.coefficient * np.sin(b * t + self.phase)
        if self.kind == "cosine":
            return self.coefficient * np.cos(b * t + self.phase)
        return self.coefficient * np.ones_like(np.asarray(t, dtype=float))

    def as_sine(self, b: float) -> tuple[float, float, float]:
        """(amplitude, frequency, phase) with value = amplitude * sin(frequency t + phase)."""
        if self.kind == "sine":
            return self.coefficient, b, self.phase
        if self.kind == "cosine":
            return self.coefficient, b, self.phase + math.pi / 2
        return self.coefficient, 0.0, math.pi / 2


class PiecewiseEval(BaseModel):
    """
    Result of applying an operator: one closed-form interior per segment plus the
    values at the atoms. ``continuity`` records which one-sided limit the atom
    values agree with for members of the operator domain ('right' for the
    eta-derivative, 'left' for its adjoint and the Laplacian).
    """

    model_config = ConfigDict(frozen=True)

    b: float
    edges: tuple[float, ...]
    segments: tuple[TrigSegment, ...]
    atom_values: tuple[float, ...]
    continuity: Literal["left", "right"]

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def interior(self, j: int, t):
        return self.segments[j].value(self.b, t)

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        edges = np.asarray(self.edges)
        idx = np.clip(np.searchsorted(edges, t, side="left") - 1, 0, self.n_segments - 1)
        out = np.empty_like(t)
        for j in range(self.n_segments):
            mask = idx == j
            if np.any(mask):
                out[mask] = self.interior(j, t[mask])

        at_atom = np.isin(t, edges[1:])
        if np.any(at_atom):
            atom_idx = np.searchsorted(edges[1:], t[at_atom])
            out[at_atom] = np.asarray(self.atom_values)[atom_idx]
        return out

    def left_limits(self) -> np.ndarray:
        """Limit from the left at each atom (segment j evaluated at its right edge)."""
        return np.array([float(self.interior(j, self.edges[j + 1])) for j in range(self.n_segments)])

    def right_limits(self) -> np.ndarray:
        """Limit from the right at each atom, wrapping z_N to the start of segment 1."""
        n = self.n_segments
        values = []
        for j in range(n):
            nxt = (j + 1) % n
            start = self.edges[j + 1] if nxt else self.edges[0]
            values.append(float(self.interior(nxt, start)))
        return np.array(values)

    def negated(self) -> "PiecewiseEval":
        segments = tuple(s.model_copy(update={"coefficient": -s.coefficient}) for s in self.segments)
        return self.model_copy(
            update={"segments": segments, "atom_values": tuple(-v for v in self.atom_values)}
        )


Function = Union[PiecewiseSine, PiecewiseEval]


# ==================== Helpers ====================


def _require_compatible(f: Function, spec: MeasureSpec) -> np.ndarray:
    """Check f lives on the segments of the canonical measure; return spec edges."""
    if not spec.is_canonical:
        raise DomainError("operator calculus needs the canonical form (last atom at 1)")
    if isinstance(f, PiecewiseSine) and f.coordinate != "F":
        raise DomainError("operators act on functions in the F-coordinate")
    edges = spec.edges()
    if len(f.edges) != len(edges) or not np.allclose(f.edges, edges, atol=_EDGE_TOL, rtol=0):
        raise DomainError(
            f"function segments {f.edges} do not match the measure segments {tuple(edges)}"
        )
    return edges


def _sine_terms(f: Function) -> list[tuple[float, float, float]]:
    if isinstance(f, PiecewiseSine):
        return [(a, f.b, g) for a, g in zip(f.amplitudes, f.phases)]
    return [s.as_sine(f.b) for s in f.segments]


def _atom_values(f: Function) -> np.ndarray:
    if isinstance(f, PiecewiseSine):
        return f.left_values()
    return np.asarray(f.atom_values, dtype=float)


def _cos_integral(omega: float, psi: float, left: float, right: float) -> float:
    """Exact integral of cos(omega t + psi) over [left, right], stable as omega -> 0."""
    h = right - left
    m = 0.5 * (left + right)
    return h * math.cos(omega * m + psi) * float(np.sinc(omega * h / (2 * math.pi)))


def constant_function(spec: MeasureSpec, value: float = 1.0) -> PiecewiseSine:
    """The constant ``value`` on the segments of ``spec``."""
    return PiecewiseSine.constant(value, spec.edges())


# ==================== Operators ====================


def apply_nabla(f: PiecewiseSine, spec: MeasureSpec) -> PiecewiseEval:
    """
    eta-derivative of a piecewise sine.

    Interior of segment j: a_j b cos(b t + gamma_j). At atom z_i:
    (f(z_i+) - f(z_i)) / alpha_i, with f(z_N+) taken from segment 1 at t = 0.

    Args:
        f: Piecewise sine in the F-coordinate
        spec: Canonical measure

    Returns:
        Right-continuous PiecewiseEval
    """
    edges = _require_compatible(f, spec)

    if f.b == 0.0:
        segments = tuple(TrigSegment(kind="constant", coefficient=0.0) for _ in f.amplitudes)
    else:
        segments = tuple(
            TrigSegment(kind="cosine", coefficient=a * f.b, phase=g)
            for a, g in zip(f.amplitudes, f.phases)
        )

    jumps = (f.right_values() - f.left_values()) / spec.weights
    return PiecewiseEval(
        b=f.b,
        edges=tuple(edges),
        segments=segments,
        atom_values=tuple(float(v) for v in jumps),
        continuity="right",
    )


def apply_nabla_star(g: PiecewiseEval, spec: MeasureSpec) -> PiecewiseEval:
    """
    Adjoint of the eta-derivative.

    Interior: negative t-derivative. At atom z_i: -(g(z_i) - g(z_i-)) / alpha_i,
    the sign that makes the operator adjoint to ``apply_nabla`` in L2(eta).

    Args:
        g: Piecewise closed form (typically the output of ``apply_nabla``)
        spec: Canonical measure

    Returns:
        Left-continuous PiecewiseEval
    """
    edges = _require_compatible(g, spec)

    segments = []
    for s in g.segments:
        if s.kind == "sine":
            segments.append(TrigSegment(kind="cosine", coefficient=-s.coefficient * g.b, phase=s.phase))
        elif s.kind == "cosine":
            segments.append(TrigSegment(kind="sine", coefficient=s.coefficient * g.b, phase=s.phase))
        else:
            segments.append(TrigSegment(kind="constant", coefficient=0.0))
    if g.b == 0.0:
        segments = [TrigSegment(kind="constant", coefficient=0.0) for _ in g.segments]

    values = -(np.asarray(g.atom_values) - g.left_limits()) / spec.weights
    return PiecewiseEval(
        b=g.b,
        edges=tuple(edges),
        segments=tuple(segments),
        atom_values=tuple(float(v) for v in values),
        continuity="left",
    )


def apply_laplacian(f: PiecewiseSine, spec: MeasureSpec) -> PiecewiseEval:
    """eta-Laplacian: -nabla_star(nabla(f))."""
    return apply_nabla_star(apply_nabla(f, spec), spec).negated()


def inner_product(f: Function, g: Function, spec: MeasureSpec) -> float:
    """
    L2(eta) inner product: integral of f g d nu plus sum_i alpha_i f(z_i) g(z_i).

    The nu-integral is evaluated segment by segment from the product-to-sum
    identity sin(X) sin(Y) = (cos(X - Y) - cos(X + Y)) / 2.
    """
    edges = _require_compatible(f, spec)
    _require_compatible(g, spec)

    total = 0.0
    for j, ((a1, w1, p1), (a2, w2, p2)) in enumerate(zip(_sine_terms(f), _sine_terms(g))):
        if a1 == 0.0 or a2 == 0.0:
            continue
        left, right = edges[j], edges[j + 1]
        total += 0.5 * a1 * a2 * (
            _cos_integral(w1 - w2, p1 - p2, left, right) - _cos_integral(w1 + w2, p1 + p2, left, right)
        )

    total += float(np.sum(spec.weights * _atom_values(f) * _atom_values(g)))
    return total


def norm(f: Function, spec: MeasureSpec) -> float:
    """L2(eta) norm."""
    return math.sqrt(max(inner_product(f, f, spec), 0.0))


def energy(f: PiecewiseSine, g: PiecewiseSine, spec: MeasureSpec) -> float:
    """Energy form E(f, g) = <nabla f, nabla g>_eta."""
    return inner_product(apply_nabla(f, spec), apply_nabla(g, spec), spec)


# ==================== Residuals and diagnostics ====================


def eigen_residual(f: PiecewiseSine, lam: float, spec: MeasureSpec, samples: int = 1000) -> float:
    """
    Pointwise eigen-equation residual.

    Returns:
        sup over atoms and ``samples`` interior points per segment of
        |Laplacian f - lam f| / max(1, |lam|)
    """
    lap = apply_laplacian(f, spec)
    edges = np.asarray(f.edges)

    worst = float(np.max(np.abs(np.asarray(lap.atom_values) - lam * f.left_values())))
    for j in range(f.n_segments):
        t = np.linspace(edges[j], edges[j + 1], samples + 2)[1:-1]
        lhs = lap.interior(j, t)
        rhs = lam * f.amplitudes[j] * np.sin(f.b * t + f.phases[j])
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))

    return worst / max(1.0, abs(lam))


def system_residual(f: PiecewiseSine, spec: MeasureSpec) -> float:
    """
    Residual of the jump equations at every atom (wrap-around pair included).

    With u = value and v = t-derivative, each atom must satisfy
    alpha v+ = u+ - u-   and   alpha b^2 u- = v- - v+.
    The first line is scaled by max(1, |b|), the second by max(1, b^2).
    """
    _require_compatible(f, spec)
    b = f.b
    a = np.asarray(f.amplitudes)
    g = np.asarray(f.phases)
    e = np.asarray(f.edges)
    alpha = spec.weights

    theta_minus = b * e[1:] + g
    starts = e[1:].copy()
    starts[-1] = e[0]
    a_next = np.roll(a, -1)
    theta_plus = b * starts + np.roll(g, -1)

    u_minus = a * np.sin(theta_minus)
    v_minus = a * b * np.cos(theta_minus)
    u_plus = a_next * np.sin(theta_plus)
    v_plus = a_next * b * np.cos(theta_plus)

    first = np.abs(alpha * v_plus - (u_plus - u_minus)) / max(1.0, abs(b))
    second = np.abs(alpha * b * b * u_minus - (v_minus - v_plus)) / max(1.0, b * b)
    return float(max(first.max(), second.max()))


def periodic_jumps(f: PiecewiseSine) -> np.ndarray:
    """|f(z_j+) - f(z_j)| at each atom of the periodic extension."""
    return np.abs(f.right_values() - f.left_values())


def sample(f: Function, samples_per_segment: int = 1000) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate f on ``samples_per_segment`` interior points of every segment."""
    edges = np.asarray(f.edges)
    ts = np.concatenate([
        np.linspace(edges[j], edges[j + 1], samples_per_segment + 2)[1:-1]
        for j in range(len(edges) - 1)
    ])
    return ts, np.asarray(f(ts))

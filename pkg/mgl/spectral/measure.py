"""
Measure Model Module
Represents, validates and normalises measures eta = nu + sum_i alpha_i delta_{z_i} on (0, 1].

The continuous part nu is either Lebesgue measure or a measure with a strictly
increasing piecewise-linear distribution function. Atoms are kept sorted by
position. Every spectral computation works on the canonical form, in which the
last atom sits at z_N = 1.
"""

import json
import logging
from pathlib import Path
from typing import Annotated, Any, Literal, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from mgl.core.errors import DomainError, MeasureValidationError

logger = logging.getLogger(__name__)

_KNOT_GAP = 1e-14


class LebesgueCdf(BaseModel):
    """Lebesgue measure on (0, 1]; its distribution function is the identity."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["lebesgue"] = "lebesgue"

    @property
    def total_mass(self) -> float:
        return 1.0

    @property
    def knots(self) -> tuple[tuple[float, float], ...]:
        return ((0.0, 0.0), (1.0, 1.0))

    def value(self, x):
        return np.asarray(x, dtype=float)

    def inverse(self, mass):
        return np.asarray(mass, dtype=float)


class PiecewiseLinearCdf(BaseModel):
    """Continuous part given by the knots (x_m, F_m) of its distribution function."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["piecewise_linear_cdf"] = "piecewise_linear_cdf"
    knots: tuple[tuple[float, float], ...] = Field(..., min_length=2)

    @field_validator("knots")
    @classmethod
    def _check_knots(cls, knots):
        xs = np.array([k[0] for k in knots], dtype=float)
        fs = np.array([k[1] for k in knots], dtype=float)

        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(fs))):
            raise ValueError("CDF knots must be finite")
        if xs[0] != 0.0 or fs[0] != 0.0:
            raise ValueError(f"first CDF knot must be (0, 0), got ({xs[0]}, {fs[0]})")
        if xs[-1] != 1.0:
            raise ValueError(f"last CDF knot must sit at x = 1, got x = {xs[-1]}")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("CDF knot positions must be strictly increasing")
        if np.any(np.diff(fs) <= 0):
            raise ValueError("CDF values must be strictly increasing (non-monotone knots)")
        return tuple((float(x), float(f)) for x, f in zip(xs, fs))

    @property
    def xs(self) -> np.ndarray:
        return np.array([k[0] for k in self.knots])

    @property
    def fs(self) -> np.ndarray:
        return np.array([k[1] for k in self.knots])

    @property
    def total_mass(self) -> float:
        return self.knots[-1][1]

    @property
    def slopes(self) -> np.ndarray:
        """Density of nu on each linear piece."""
        return np.diff(self.fs) / np.diff(self.xs)

    def value(self, x):
        return np.interp(x, self.xs, self.fs)

    def inverse(self, mass):
        return np.interp(mass, self.fs, self.xs)


ContinuousPart = Annotated[Union[LebesgueCdf, PiecewiseLinearCdf], Field(discriminator="type")]


class Atom(BaseModel):
    """A weighted Dirac point mass alpha * delta_z."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    z: float = Field(..., gt=0, le=1, allow_inf_nan=False)
    alpha: float = Field(..., gt=0, allow_inf_nan=False)


class MeasureSpec(BaseModel):
    """
    The measure eta = nu + sum_i alpha_i delta_{z_i}.

    Atoms are stored in ascending order of position; duplicate positions are
    rejected (exact equality).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    continuous: ContinuousPart = Field(default_factory=LebesgueCdf)
    atoms: tuple[Atom, ...] = Field(..., min_length=1)

    @field_validator("atoms")
    @classmethod
    def _sort_atoms(cls, atoms):
        ordered = tuple(sorted(atoms, key=lambda a: a.z))
        for left, right in zip(ordered, ordered[1:]):
            if left.z == right.z:
                raise ValueError(f"duplicate atom position z={left.z}")
        return ordered

    # ==================== Derived quantities ====================

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def positions(self) -> np.ndarray:
        return np.array([a.z for a in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.alpha for a in self.atoms])

    @property
    def continuous_mass(self) -> float:
        return float(self.continuous.total_mass)

    @property
    def atom_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def total_mass(self) -> float:
        return self.continuous_mass + self.atom_mass

    @property
    def is_canonical(self) -> bool:
        return self.atoms[-1].z == 1.0

    def distribution_value(self, x) -> float:
        """F_nu(x) of the continuous part (atoms excluded)."""
        return distribution_value(self, x)

    def edges(self) -> np.ndarray:
        """Segment edges in the F-coordinate: (0, F(z_1), ..., F(z_N))."""
        values = np.asarray(self.continuous.value(self.positions), dtype=float)
        return np.concatenate(([0.0], values))

    def segment_masses(self) -> np.ndarray:
        """nu-mass Delta F_j of each inter-atom segment (z_{j-1}, z_j], z_0 = 0."""
        return np.diff(self.edges())

    def with_atoms(self, atoms: Sequence[tuple[float, float]]) -> "MeasureSpec":
        """Copy of the measure with the same continuous part and new atoms."""
        return MeasureSpec(
            continuous=self.continuous,
            atoms=tuple(Atom(z=z, alpha=alpha) for z, alpha in atoms),
        )


class CanonicalForm(BaseModel):
    """A measure rotated so that its last atom sits at 1, plus the applied shift."""

    model_config = ConfigDict(frozen=True)

    spec: MeasureSpec
    shift: float = Field(..., ge=0, lt=1)

    @property
    def original_last_atom(self) -> float:
        return 1.0 - self.shift

    def canonical_position(self, x: float) -> float:
        """Map a position of the original measure to the canonical circle."""
        z_last = self.original_last_atom
        if x > z_last:
            return x - z_last
        return 1.0 - (z_last - x)

    def original_position(self, y: float) -> float:
        """Inverse of ``canonical_position``."""
        z_last = self.original_last_atom
        if y <= self.shift:
            return z_last + y
        return z_last - (1.0 - y)


# ==================== Operations ====================


def validate_measure(raw: Any) -> MeasureSpec:
    """
    Validate a measure description.

    Args:
        raw: A MeasureSpec, a dict in the JSON layout, or a JSON string/bytes

    Returns:
        MeasureSpec with atoms sorted ascending

    Raises:
        MeasureValidationError: If any MeasureSpec invariant is violated
    """
    if isinstance(raw, MeasureSpec):
        return raw

    try:
        if isinstance(raw, (str, bytes, bytearray)):
            spec = MeasureSpec.model_validate_json(raw)
        else:
            spec = MeasureSpec.model_validate(raw)
    except ValidationError as exc:
        raise MeasureValidationError(str(exc)) from exc

    logger.debug("validated measure with %d atoms", spec.n_atoms)
    return spec


def load_measure(path: Union[str, Path]) -> MeasureSpec:
    """Read and validate a measure JSON document from disk."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MeasureValidationError(f"cannot read measure file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureValidationError(f"{path} is not valid JSON: {exc}") from exc
    return validate_measure(raw)


def distribution_value(spec: MeasureSpec, x) -> float:
    """
    Distribution function F_nu of the continuous part.

    Args:
        spec: Validated measure
        x: Position in [0, 1]

    Returns:
        F_nu(x); F_nu(0) = 0

    Raises:
        DomainError: If x lies outside [0, 1]
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    return float(spec.continuous.value(x))


def _rotate_cdf(continuous: PiecewiseLinearCdf, z_last: float) -> PiecewiseLinearCdf:
    """Distribution function of nu pushed forward by x -> x + 1 - z_last (mod 1)."""
    shift = 1.0 - z_last
    mass_at_z = float(continuous.value(z_last))
    total = continuous.total_mass

    candidates = [0.0, shift, 1.0]
    candidates += [x - z_last for x in continuous.xs if x > z_last]
    candidates += [x + shift for x in continuous.xs if x < z_last]

    knots = []
    for y in sorted(candidates):
        if knots and y - knots[-1][0] <= _KNOT_GAP:
            continue
        if y <= shift:
            value = float(continuous.value(z_last + y)) - mass_at_z
        else:
            value = total - mass_at_z + float(continuous.value(y - shift))
        knots.append((y, value))

    knots[0] = (0.0, 0.0)
    knots[-1] = (1.0, total)
    return PiecewiseLinearCdf(knots=tuple(knots))


def to_canonical(spec: MeasureSpec) -> CanonicalForm:
    """
    Rotate the measure so that its last atom sits at 1.

    Positions move by z -> z + 1 - z_N; the continuous part is rotated with
    them. Eigenvalues are unchanged, and eigenfunctions transfer through
    ``CanonicalForm.canonical_position``.

    Args:
        spec: Validated measure

    Returns:
        CanonicalForm; idempotent on canonical input (shift 0)
    """
    if spec.is_canonical:
        return CanonicalForm(spec=spec, shift=0.0)

    z_last = spec.atoms[-1].z
    shift = 1.0 - z_last

    atoms = [(1.0 - (z_last - a.z), a.alpha) for a in spec.atoms[:-1]]
    atoms.append((1.0, spec.atoms[-1].alpha))

    continuous = spec.continuous
    if isinstance(continuous, PiecewiseLinearCdf):
        continuous = _rotate_cdf(continuous, z_last)

    canonical = MeasureSpec(
        continuous=continuous,
        atoms=tuple(Atom(z=z, alpha=alpha) for z, alpha in atoms),
    )
    logger.debug("rotated measure by %.15g to canonical form", shift)
    return CanonicalForm(spec=canonical, shift=shift)


# ==================== Factories ====================


def one_atom_measure(alpha: float, z: float = 1.0) -> MeasureSpec:
    """Lebesgue measure plus a single atom alpha * delta_z."""
    return MeasureSpec(atoms=(Atom(z=z, alpha=alpha),))


def two_atom_measure(alpha: float) -> MeasureSpec:
    """Lebesgue measure plus equal atoms at 1/2 and 1."""
    return MeasureSpec(atoms=(Atom(z=0.5, alpha=alpha), Atom(z=1.0, alpha=alpha)))


def equally_spaced_measure(alphas: Sequence[float]) -> MeasureSpec:
    """Lebesgue measure plus atoms alpha_i at i/N, i = 1..N."""
    n = len(alphas)
    atoms = [Atom(z=1.0 if i == n else i / n, alpha=alpha) for i, alpha in enumerate(alphas, start=1)]
    return MeasureSpec(atoms=tuple(atoms))

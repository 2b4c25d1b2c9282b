"""
SVG rendering of piecewise-sine eigenfunctions.

Each atom is drawn with a filled dot at the function value (left-continuous),
an open circle at the excluded right limit and a dashed line joining them.
Functions computed on the canonical (rotated) measure are drawn back in the
coordinates of the measure as it was given.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from mgl.core.config import get_settings
from mgl.core.errors import DomainError, ReportError
from mgl.spectral.calculus import PiecewiseSine
from mgl.spectral.measure import LebesgueCdf, MeasureSpec
from mgl.spectral.monodromy import pullback_to_x

logger = logging.getLogger(__name__)

_HASH_SALT = "mgl"
_COLOR = "#1f4e79"

CURVE = "_curve"
ATOM_VALUE = "_atom_value"
RIGHT_LIMIT = "_right_limit"
JUMP = "_jump"


def _atom_positions(f: PiecewiseSine, spec: Optional[MeasureSpec]) -> np.ndarray:
    if spec is not None:
        return spec.positions
    return np.asarray(f.edges[1:])


def _unrotate(y: np.ndarray, shift: float) -> np.ndarray:
    """Canonical position to position on the original circle (0, 1]."""
    return np.where(y <= shift, y + 1.0 - shift, y - shift)


def eigenfunction_figure(
    f: PiecewiseSine,
    spec: Optional[MeasureSpec] = None,
    shift: float = 0.0,
    title: Optional[str] = None,
    samples_per_segment: Optional[int] = None,
) -> Figure:
    """
    Figure of f on (0, 1] in the x-coordinate of the original measure.

    Args:
        f: Eigenfunction in the F- or x-coordinate of the canonical measure
        spec: Canonical measure f lives on; needed for non-Lebesgue continuous parts
        shift: Rotation that produced the canonical measure (``CanonicalForm.shift``)
        title: Optional axes title
        samples_per_segment: Curve resolution per segment
    """
    if not 0.0 <= shift < 1.0:
        raise DomainError(f"shift must lie in [0, 1), got {shift}")
    samples = samples_per_segment or get_settings().samples_per_segment

    if spec is not None and f.coordinate == "F" and not isinstance(spec.continuous, LebesgueCdf):
        f = pullback_to_x(f, spec.continuous)
    positions = _atom_positions(f, spec)
    bounds = np.concatenate(([0.0], positions))

    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()

    for j in range(len(positions)):
        ys = np.linspace(bounds[j], bounds[j + 1], samples + 2)[1:]
        values = f(ys)
        # a segment that contains the original point 1 is split there
        for part in (ys <= shift, ys > shift):
            if np.count_nonzero(part) > 1:
                ax.plot(_unrotate(ys[part], shift), values[part], color=_COLOR, linewidth=1.5, label=CURVE)

    values = np.asarray(f(positions))
    start = float(f(np.array([np.nextafter(0.0, 1.0)]))[0])
    right = np.concatenate((np.asarray(f(np.nextafter(positions[:-1], 2.0))), [start]))
    xs = _unrotate(positions, shift)
    for x, left_value, right_value in zip(xs, values, right):
        x_open = float(x) if x < 1.0 else 0.0
        ax.plot([x], [left_value], "o", color=_COLOR, markersize=5, label=ATOM_VALUE)
        ax.plot([x_open], [right_value], "o", markerfacecolor="white", markeredgecolor=_COLOR,
                markersize=5, label=RIGHT_LIMIT)
        if x < 1.0 and left_value != right_value:
            ax.plot([x, x], [left_value, right_value], linestyle="--", color=_COLOR, linewidth=0.8, label=JUMP)

    ticks = sorted(set([0.0] + [float(x) for x in xs]))
    ax.set_xticks(ticks)
    ax.set_xticklabels([f"{t:.4g}" for t in ticks])
    ax.set_yticks([-1.0, 0.0, 1.0])
    ax.axhline(0.0, color="grey", linewidth=0.5)
    peak = max(1.0, float(np.max(np.abs(values))), abs(start))
    ax.set_ylim(-1.1 * peak, 1.1 * peak)
    ax.set_xlim(-0.02, 1.02)
    ax.set_xlabel("x")
    if title:
        ax.set_title(title)
    return fig


def render_eigenfunction(
    f: PiecewiseSine,
    path: Union[str, Path],
    spec: Optional[MeasureSpec] = None,
    title: Optional[str] = None,
    samples_per_segment: Optional[int] = None,
    shift: float = 0.0,
) -> Path:
    """
    Draw f with ``eigenfunction_figure`` and save it as SVG.

    Returns:
        The written path

    Raises:
        ReportError: If the file cannot be written
    """
    path = Path(path)
    fig = eigenfunction_figure(f, spec, shift, title, samples_per_segment)
    try:
        with matplotlib.rc_context({"svg.hashsalt": _HASH_SALT}):
            fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc}") from exc

    logger.info("wrote eigenfunction plot to %s", path)
    return path

import json
import math

import pytest
from hypothesis import settings as hypothesis_settings

from mgl.core.config import get_settings
from mgl.spectral import (
    equally_spaced_measure,
    one_atom_measure,
    two_atom_measure,
    validate_measure,
)

hypothesis_settings.register_profile("ci", max_examples=25, deadline=None)
hypothesis_settings.load_profile("ci")


@pytest.fixture
def one_atom():
    """Lebesgue measure plus delta_1 / pi."""
    return one_atom_measure(1 / math.pi)


@pytest.fixture
def two_atoms():
    """Lebesgue measure plus (delta_{1/2} + delta_1) / pi."""
    return two_atom_measure(1 / math.pi)


@pytest.fixture
def three_equal():
    return equally_spaced_measure([0.1, 0.1, 0.1])


@pytest.fixture
def uneven():
    """Three unequal atoms over a piecewise-linear continuous part."""
    return validate_measure({
        "continuous": {"type": "piecewise_linear_cdf", "knots": [[0, 0], [0.4, 0.7], [1, 1.2]]},
        "atoms": [{"z": 0.25, "alpha": 0.2}, {"z": 0.6, "alpha": 0.05}, {"z": 1.0, "alpha": 0.4}],
    })


@pytest.fixture
def measure_file(tmp_path):
    """Write a measure dict to a JSON file and return its path."""

    def write(raw, name="measure.json"):
        path = tmp_path / name
        path.write_text(json.dumps(raw), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def env_settings(monkeypatch):
    """Set MGL_* variables for one test and rebuild the cached settings."""

    def apply(**values):
        for key, value in values.items():
            monkeypatch.setenv(f"MGL_{key.upper()}", str(value))
        get_settings.cache_clear()
        return get_settings()

    yield apply
    get_settings.cache_clear()

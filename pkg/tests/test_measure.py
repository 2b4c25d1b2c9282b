import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgl.core.errors import DomainError, MeasureValidationError
from mgl.spectral import (
    PiecewiseLinearCdf,
    distribution_value,
    equally_spaced_measure,
    load_measure,
    one_atom_measure,
    to_canonical,
    validate_measure,
)


def test_validate_sorts_atoms():
    spec = validate_measure({
        "continuous": {"type": "lebesgue"},
        "atoms": [{"z": 1.0, "alpha": 0.5}, {"z": 0.3, "alpha": 0.2}],
    })
    assert spec.positions.tolist() == [0.3, 1.0]
    assert spec.weights.tolist() == [0.2, 0.5]
    assert spec.is_canonical


def test_validate_accepts_json_text():
    text = '{"continuous": {"type": "lebesgue"}, "atoms": [{"z": 0.5, "alpha": 1.0}]}'
    spec = validate_measure(text)
    assert spec.n_atoms == 1
    assert not spec.is_canonical


@pytest.mark.parametrize("atoms", [
    [{"z": 0.5, "alpha": 0.0}],
    [{"z": 0.5, "alpha": -1.0}],
    [{"z": 0.0, "alpha": 1.0}],
    [{"z": 1.2, "alpha": 1.0}],
    [{"z": 0.5, "alpha": 1.0}, {"z": 0.5, "alpha": 2.0}],
    [],
])
def test_invalid_atoms_rejected(atoms):
    with pytest.raises(MeasureValidationError):
        validate_measure({"continuous": {"type": "lebesgue"}, "atoms": atoms})


@pytest.mark.parametrize("knots", [
    [[0, 0], [0.5, 0.6], [0.4, 0.8], [1, 1]],
    [[0, 0], [0.5, 0.6], [0.7, 0.6], [1, 1]],
    [[0, 0.1], [1, 1]],
    [[0, 0], [0.9, 1]],
])
def test_invalid_knots_rejected(knots):
    with pytest.raises(MeasureValidationError):
        validate_measure({
            "continuous": {"type": "piecewise_linear_cdf", "knots": knots},
            "atoms": [{"z": 1.0, "alpha": 1.0}],
        })


def test_unknown_fields_rejected():
    with pytest.raises(MeasureValidationError):
        validate_measure({"continuous": {"type": "lebesgue"}, "atoms": [{"z": 1.0, "alpha": 1.0, "w": 2}]})


def test_load_measure(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"continuous": {"type": "lebesgue"}, "atoms": [{"z": 1.0, "alpha": 0.25}]}))
    assert load_measure(path) == one_atom_measure(0.25)


def test_load_measure_bad_json(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    with pytest.raises(MeasureValidationError):
        load_measure(path)


def test_load_measure_missing_file(tmp_path):
    with pytest.raises(MeasureValidationError):
        load_measure(tmp_path / "absent.json")


def test_distribution_value(uneven):
    assert distribution_value(one_atom_measure(1.0), 0.37) == pytest.approx(0.37)
    assert distribution_value(uneven, 0.2) == pytest.approx(0.35)
    assert distribution_value(uneven, 0.0) == 0.0
    assert distribution_value(uneven, 1.0) == pytest.approx(1.2)
    with pytest.raises(DomainError):
        distribution_value(uneven, 1.5)
    with pytest.raises(DomainError):
        distribution_value(uneven, -0.1)


def test_segment_masses(uneven):
    np.testing.assert_allclose(uneven.edges(), [0.0, 0.4375, 0.7 + 0.5 / 3, 1.2], atol=1e-14)
    assert uneven.segment_masses().sum() == pytest.approx(uneven.continuous_mass)


def test_canonical_one_atom():
    form = to_canonical(one_atom_measure(0.5, z=0.6))
    assert form.shift == pytest.approx(0.4)
    assert form.spec.positions.tolist() == [1.0]


def test_canonical_two_atoms():
    spec = validate_measure({"atoms": [{"z": 0.3, "alpha": 0.1}, {"z": 0.6, "alpha": 0.2}]})
    form = to_canonical(spec)
    np.testing.assert_allclose(form.spec.positions, [0.7, 1.0])
    np.testing.assert_allclose(form.spec.weights, [0.1, 0.2])
    assert form.canonical_position(0.3) == pytest.approx(0.7)
    assert form.original_position(0.7) == pytest.approx(0.3)
    assert form.canonical_position(0.8) == pytest.approx(0.2)


def test_canonical_is_idempotent(two_atoms):
    form = to_canonical(two_atoms)
    assert form.shift == 0.0
    assert form.spec == two_atoms
    again = to_canonical(to_canonical(one_atom_measure(1.0, z=0.25)).spec)
    assert again.shift == 0.0


def test_canonical_rotates_piecewise_cdf(uneven):
    spec = uneven.with_atoms([(0.25, 0.2), (0.6, 0.05)])
    form = to_canonical(spec)
    cont = form.spec.continuous
    assert isinstance(cont, PiecewiseLinearCdf)
    assert cont.total_mass == pytest.approx(1.2)

    f = spec.continuous.value
    # mass of the wrapped segment (0.6, 1] followed by (0, 0.25]
    expected = (f(1.0) - f(0.6)) + f(0.25)
    assert form.spec.edges()[1] == pytest.approx(expected)
    assert form.spec.edges()[2] == pytest.approx(1.2)


@given(st.floats(0.05, 0.95), st.floats(0.01, 0.99))
def test_position_maps_are_inverse(z_last, x):
    spec = one_atom_measure(0.3, z=z_last)
    form = to_canonical(spec)
    y = form.canonical_position(x)
    assert 0.0 < y <= 1.0
    assert form.original_position(y) == pytest.approx(x, abs=1e-12)


def test_equally_spaced_positions():
    spec = equally_spaced_measure([0.1, 0.2, 0.3])
    np.testing.assert_allclose(spec.positions, [1 / 3, 2 / 3, 1.0])
    assert spec.positions[-1] == 1.0
    assert spec.total_mass == pytest.approx(1.6)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError
from scipy.integrate import quad

from mgl.core.errors import DomainError
from mgl.spectral import (
    PiecewiseEval,
    PiecewiseSine,
    apply_laplacian,
    apply_nabla,
    apply_nabla_star,
    constant_function,
    eigen_residual,
    eigenpair_one_atom,
    eigenpair_two_atoms,
    energy,
    find_spectrum,
    inner_product,
    norm,
    one_atom_measure,
    periodic_jumps,
    system_residual,
    two_atom_measure,
)
from mgl.spectral.calculus import TrigSegment, sample
from mgl.spectral.closed_form import DOUBLE_PRIME_OFFSET


def _piecewise(spec, b, amplitudes, phases):
    return PiecewiseSine(b=b, amplitudes=tuple(amplitudes), phases=tuple(phases), edges=tuple(spec.edges()))


def test_constant_is_in_the_kernel(uneven):
    one = constant_function(uneven)
    grad = apply_nabla(one, uneven)
    assert np.allclose(grad.atom_values, 0.0)
    assert np.allclose(grad(np.linspace(0.01, 1.19, 50)), 0.0)
    lap = apply_laplacian(one, uneven)
    assert np.allclose(lap.atom_values, 0.0)
    assert eigen_residual(one, 0.0, uneven) == 0.0
    assert np.all(periodic_jumps(one) == 0.0)


@pytest.mark.parametrize("k", [-3, -2, -1, 1, 2, 3])
def test_one_atom_eigenfunctions_satisfy_equations(k, one_atom):
    pair = eigenpair_one_atom(1 / math.pi, k)
    assert eigen_residual(pair.fn, pair.eigenvalue, one_atom) <= 1e-8
    assert system_residual(pair.fn, one_atom) <= 1e-10


@pytest.mark.parametrize("k", [-3, -2, -1, 1, 2, 3])
def test_two_atom_eigenfunctions_satisfy_equations(k, two_atoms):
    pair = eigenpair_two_atoms(1 / math.pi, k)
    assert eigen_residual(pair.fn, pair.eigenvalue, two_atoms) <= 1e-8
    assert system_residual(pair.fn, two_atoms) <= 1e-10


def test_wrong_frequency_has_large_residual(one_atom):
    pair = eigenpair_one_atom(1 / math.pi, 1)
    assert system_residual(pair.fn, one_atom) <= 1e-10
    shifted = pair.fn.model_copy(update={"b": pair.b + 0.1})
    assert system_residual(shifted, one_atom) > 1e-3


def test_second_special_family_eigenfunction():
    alpha = 1 / (DOUBLE_PRIME_OFFSET + 2 * math.pi)
    spec = two_atom_measure(alpha)
    b = 1 / alpha
    fn = PiecewiseSine(
        b=b,
        amplitudes=(1.0, 1.0),
        phases=(math.atan(2.0), math.atan(2.0) - 2 * math.atan(0.5) + math.pi / 2),
        edges=(0.0, 0.5, 1.0),
    )
    assert system_residual(fn, spec) <= 1e-10
    assert eigen_residual(fn, -b * b, spec) <= 1e-8


def test_inner_product_matches_quadrature(uneven):
    f = _piecewise(uneven, 3.7, (1.0, -0.5, 2.0), (0.3, 1.1, 2.0))
    g = _piecewise(uneven, 5.2, (0.4, 1.5, -1.0), (2.5, 0.2, 4.0))
    edges = uneven.edges()

    expected = 0.0
    for j in range(3):
        integrand = lambda t, j=j: (
            f.amplitudes[j] * math.sin(f.b * t + f.phases[j])
            * g.amplitudes[j] * math.sin(g.b * t + g.phases[j])
        )
        expected += quad(integrand, edges[j], edges[j + 1], epsabs=1e-13, epsrel=1e-13)[0]
    expected += float(np.sum(uneven.weights * f.left_values() * g.left_values()))

    assert inner_product(f, g, uneven) == pytest.approx(expected, abs=1e-11)
    assert inner_product(f, g, uneven) == pytest.approx(inner_product(g, f, uneven), abs=1e-13)


def test_inner_product_equal_frequencies(one_atom):
    # equal frequencies exercise the omega -> 0 branch of the antiderivative
    f = _piecewise(one_atom, 4.0, (1.0,), (0.0,))
    expected = quad(lambda t: math.sin(4.0 * t) ** 2, 0.0, 1.0)[0] + one_atom.weights[0] * math.sin(4.0) ** 2
    assert norm(f, one_atom) ** 2 == pytest.approx(expected, abs=1e-12)


@given(
    b=st.floats(0.1, 30.0),
    amplitudes=st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3),
    phases=st.lists(st.floats(0.0, 2 * math.pi), min_size=3, max_size=3),
)
def test_derivative_has_mean_zero(b, amplitudes, phases):
    spec = two_atom_measure(0.3).with_atoms([(0.2, 0.3), (0.7, 0.05), (1.0, 0.6)])
    f = _piecewise(spec, b, amplitudes, phases)
    grad = apply_nabla(f, spec)
    assert inner_product(grad, constant_function(spec), spec) == pytest.approx(0.0, abs=1e-10)


def test_laplacian_quadratic_form(uneven):
    result = find_spectrum(uneven, 15.0)
    h = _piecewise(uneven, 2.3, (1.0, 0.2, -0.7), (0.5, 1.5, 3.0))
    for pair in result.pairs:
        f = pair.fn
        assert norm(f, uneven) == pytest.approx(1.0, abs=1e-10)
        lap = apply_laplacian(f, uneven)
        assert inner_product(lap, f, uneven) == pytest.approx(pair.eigenvalue, abs=1e-9 * max(1.0, pair.b ** 2))
        assert energy(f, f, uneven) == pytest.approx(pair.b ** 2, abs=1e-9 * max(1.0, pair.b ** 2))
        assert inner_product(lap, h, uneven) == pytest.approx(-energy(f, h, uneven), abs=1e-9 * max(1.0, pair.b ** 2))


def test_non_constant_eigenfunctions_jump(one_atom):
    pair = eigenpair_one_atom(1 / math.pi, 1)
    assert periodic_jumps(pair.fn)[0] > 1e-3


def test_incompatible_inputs(one_atom, two_atoms):
    f = eigenpair_one_atom(1 / math.pi, 1).fn
    with pytest.raises(DomainError):
        apply_nabla(f, two_atoms)
    with pytest.raises(DomainError):
        apply_nabla(f, one_atom_measure(1 / math.pi, z=0.5))


def test_piecewise_sine_shape_is_validated():
    with pytest.raises(ValidationError):
        PiecewiseSine(b=1.0, amplitudes=(1.0, 2.0), phases=(0.0,), edges=(0.0, 1.0))
    with pytest.raises(ValidationError):
        PiecewiseSine(b=1.0, amplitudes=(1.0,), phases=(0.0,), edges=(0.0, 1.0), coordinate="x")


def test_evaluation_is_left_continuous(two_atoms):
    fn = eigenpair_two_atoms(1 / math.pi, 1).fn
    at_atom = float(fn(np.array([0.5]))[0])
    left_piece = fn.amplitudes[0] * math.sin(fn.b * 0.5 + fn.phases[0])
    assert at_atom == pytest.approx(left_piece, abs=1e-15)
    assert fn.left_values()[0] == pytest.approx(left_piece, abs=1e-15)


def test_sample_shape(two_atoms):
    fn = eigenpair_two_atoms(1 / math.pi, 2).fn
    ts, values = sample(fn, 20)
    assert ts.shape == values.shape == (40,)
    assert np.all((ts > 0) & (ts < 1))


@pytest.mark.parametrize("b", [0.0, 2.5])
def test_nabla_star_annihilates_constants(b, uneven):
    g = PiecewiseEval(
        b=b,
        edges=tuple(uneven.edges()),
        segments=tuple(TrigSegment(kind="constant", coefficient=0.7) for _ in range(uneven.n_atoms)),
        atom_values=(0.7,) * uneven.n_atoms,
        continuity="right",
    )
    out = apply_nabla_star(g, uneven)
    assert np.all(np.asarray(out.atom_values) == 0.0)
    assert np.all(out(np.linspace(0.01, 1.19, 40)) == 0.0)


@given(
    b=st.lists(st.floats(0.0, 25.0), min_size=2, max_size=2),
    amplitudes=st.lists(st.floats(-2.0, 2.0), min_size=6, max_size=6),
    phases=st.lists(st.floats(0.0, 2 * math.pi), min_size=6, max_size=6),
)
def test_energy_is_symmetric_and_non_negative(b, amplitudes, phases):
    spec = two_atom_measure(0.3).with_atoms([(0.2, 0.3), (0.7, 0.05), (1.0, 0.6)])
    f = _piecewise(spec, b[0], amplitudes[:3], phases[:3])
    g = _piecewise(spec, b[1], amplitudes[3:], phases[3:])
    scale = 1.0 + max(b) ** 2 + 1.0 / 0.05 ** 2
    assert energy(f, g, spec) == pytest.approx(energy(g, f, spec), abs=1e-10 * scale)
    assert energy(f, f, spec) >= -1e-12 * scale
    assert energy(f, f, spec) == pytest.approx(inner_product(apply_nabla(f, spec), apply_nabla(f, spec), spec))

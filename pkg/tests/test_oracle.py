import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgl.core.errors import ConvergenceError, DomainError
from mgl.spectral import (
    AtomicApprox,
    compare_spectra,
    discretize,
    find_spectrum,
    jacobi_eigh,
    laplacian_profile,
    lowest_eigenpairs,
    one_atom_measure,
    oracle_eigenvalues,
)
from mgl.spectral.oracle import cycle_operator, weighted_inner


def _uniform(m):
    return AtomicApprox(
        positions=tuple((i + 1) / m for i in range(m)),
        weights=(1 / m,) * m,
        is_original=(True,) * m,
    )


def _random_atomic(weights):
    m = len(weights)
    return AtomicApprox(positions=tuple((i + 1) / m for i in range(m)), weights=tuple(weights), is_original=(False,) * m)


def test_discretize_one_atom():
    approx = discretize(one_atom_measure(0.5), 4)
    np.testing.assert_allclose(approx.positions, [0.125, 0.375, 0.625, 0.875, 1.0])
    np.testing.assert_allclose(approx.weights, [0.25, 0.25, 0.25, 0.25, 0.5])
    assert approx.is_original == (False, False, False, False, True)


def test_discretize_keeps_mass(uneven):
    approx = discretize(uneven, 100)
    assert approx.total_mass == pytest.approx(uneven.total_mass, abs=1e-12)
    assert sum(approx.is_original) == uneven.n_atoms
    assert list(approx.positions) == sorted(approx.positions)


def test_discretize_wraps_trailing_mass():
    spec = one_atom_measure(0.2, z=0.6)
    approx = discretize(spec, 50)
    assert approx.total_mass == pytest.approx(1.2, abs=1e-12)
    assert approx.positions[-1] > 0.6
    with pytest.raises(DomainError):
        discretize(spec, 0)


def test_three_cycle_example():
    values = [lam for lam, _ in lowest_eigenpairs(laplacian_profile(_uniform(3)), 3)]
    np.testing.assert_allclose(values, [0.0, -27.0, -27.0], atol=1e-10)


def test_profile_entries():
    matrix = laplacian_profile(_uniform(3)).matrix
    np.testing.assert_allclose(matrix, [[-18, 9, 9], [9, -18, 9], [9, 9, -18]])
    with pytest.raises(DomainError):
        laplacian_profile(_uniform(2))


@pytest.mark.parametrize("m", [5, 8, 12])
def test_uniform_cycle_spectrum(m):
    profile = laplacian_profile(_uniform(m))
    values = sorted((lam for lam, _ in lowest_eigenpairs(profile, m)), reverse=True)
    expected = sorted((-4 * m * m * math.sin(math.pi * j / m) ** 2 for j in range(m)), reverse=True)
    np.testing.assert_allclose(values, expected, atol=1e-9 * m * m)


def test_kernel_is_square_root_of_weights():
    weights = np.array([0.3, 0.05, 0.2, 0.4, 0.15])
    profile = laplacian_profile(_random_atomic(weights))
    lam, vec = lowest_eigenpairs(profile, 1)[0]
    assert lam == pytest.approx(0.0, abs=1e-10 * float(np.abs(profile.matrix).max()))
    expected = np.sqrt(weights) / np.linalg.norm(np.sqrt(weights))
    assert abs(float(vec @ expected)) == pytest.approx(1.0, abs=1e-9)


@given(st.lists(st.floats(0.01, 1.0), min_size=3, max_size=12))
def test_jacobi_matches_lapack(weights):
    profile = laplacian_profile(_random_atomic(weights))
    jac = lowest_eigenpairs(profile, profile.size, method="jacobi")
    lap = lowest_eigenpairs(profile, profile.size, method="lapack")
    scale = float(np.abs(profile.matrix).max())
    np.testing.assert_allclose([v for v, _ in jac], [v for v, _ in lap], atol=1e-9 * scale)
    for lam, vec in jac:
        assert np.linalg.norm(profile.matrix @ vec - lam * vec) <= 1e-8 * scale
        assert lam <= 1e-10 * scale


@given(st.lists(st.floats(0.01, 1.0), min_size=3, max_size=12), st.integers(0, 2 ** 32 - 1))
def test_cycle_operator_is_self_adjoint(weights, seed):
    rng = np.random.default_rng(seed)
    approx = _random_atomic(weights)
    f, g = rng.normal(size=(2, approx.size))
    w = np.asarray(weights)
    lhs = weighted_inner(cycle_operator(approx, f), g, w)
    rhs = weighted_inner(f, cycle_operator(approx, g), w)
    scale = float(np.max(1 / w) ** 2) * float(np.linalg.norm(f) * np.linalg.norm(g))
    assert lhs == pytest.approx(rhs, abs=1e-12 * scale * approx.size)
    assert weighted_inner(cycle_operator(approx, f), f, w) <= 1e-12 * scale * approx.size


def test_symmetric_profile_is_similar_to_cycle_operator():
    weights = np.array([0.3, 0.05, 0.2, 0.4, 0.15])
    approx = _random_atomic(weights)
    profile = laplacian_profile(approx)
    lam, vec = lowest_eigenpairs(profile, 2)[1]
    f = vec / np.sqrt(weights)
    np.testing.assert_allclose(cycle_operator(approx, f), lam * f, atol=1e-8 * abs(lam))


def test_jacobi_sweep_cap():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(10, 10))
    with pytest.raises(ConvergenceError) as info:
        jacobi_eigh(a + a.T, max_sweeps=1)
    assert info.value.off_diagonal_norm > 0


@pytest.mark.parametrize(
    "weights",
    [[1.0, 1.0, 0.5, 0.25, 0.625], [0.78125, 1.0, 1.0, 0.75], [0.01, 1.0, 0.01, 1.0, 0.5]],
)
def test_jacobi_converges_on_repeated_weights(weights):
    profile = laplacian_profile(_random_atomic(weights))
    values, vectors = jacobi_eigh(profile.matrix)
    scale = float(np.linalg.norm(profile.matrix))
    np.testing.assert_allclose(np.sort(values), np.linalg.eigvalsh(profile.matrix), atol=1e-10 * scale)
    residual = profile.matrix @ vectors - vectors * values
    assert np.linalg.norm(residual, axis=0).max() <= 1e-8 * scale
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(len(weights)), atol=1e-10)


def test_jacobi_with_tiny_coupling_next_to_large_one():
    a = np.zeros((4, 4))
    a[0, 0], a[1, 1] = 1.0, 2.0
    a[0, 1] = a[1, 0] = 1e-170
    a[2, 3] = a[3, 2] = 1.0
    values, vectors = jacobi_eigh(a)
    assert np.all(np.isfinite(vectors))
    np.testing.assert_allclose(np.sort(values), [-1.0, 1.0, 1.0, 2.0], atol=1e-14)


def test_lowest_eigenpairs_bounds():
    profile = laplacian_profile(_uniform(4))
    with pytest.raises(DomainError):
        lowest_eigenpairs(profile, 0)
    with pytest.raises(DomainError):
        lowest_eigenpairs(profile, 5)


def test_compare_spectra():
    report = compare_spectra([0.0, -10.0, -20.0], [0.0, -10.5, -19.0], 3)
    assert report.count == 3
    np.testing.assert_allclose(report.relative_errors, [0.0, 0.05, 0.05])
    assert report.max_error == pytest.approx(0.05)
    assert not report.length_mismatch

    short = compare_spectra([0.0, -10.0], [0.0, -10.0, -20.0], 3)
    assert short.count == 2
    assert short.length_mismatch

    empty = compare_spectra([], [], 0)
    assert empty.count == 0 and empty.max_error == 0.0


def test_oracle_tracks_analytic_spectrum(one_atom, two_atoms):
    for spec in (one_atom, two_atoms):
        analytic = find_spectrum(spec, 25.0)
        report = compare_spectra(analytic, oracle_eigenvalues(spec, 400, 6), 6)
        assert report.count == 6
        assert report.max_error <= 1e-2


@pytest.mark.slow
@pytest.mark.parametrize("fixture", ["one_atom", "two_atoms"])
def test_oracle_convergence(fixture, request):
    spec = request.getfixturevalue(fixture)
    analytic = find_spectrum(spec, 25.0)
    errors = [
        compare_spectra(analytic, oracle_eigenvalues(spec, n, 6), 6).max_error
        for n in (250, 500, 1000, 2000)
    ]
    assert errors[-1] <= 1e-2
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))

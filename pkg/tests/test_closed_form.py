import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgl.core.errors import DomainError
from mgl.spectral import (
    TanLineProblem,
    closed_form_spectrum,
    eigenpair_one_atom,
    eigenpair_two_atoms,
    family_index,
    one_atom_measure,
    solve_tan_line,
    special_alpha_class,
    tan_line_residual,
    two_atom_measure,
)
from mgl.spectral.closed_form import DOUBLE_PRIME_OFFSET, solve_tan_equation

INV_PI = 1 / math.pi


def test_problem_validation():
    with pytest.raises(DomainError):
        TanLineProblem(beta=0.0, k=1)
    with pytest.raises(DomainError):
        TanLineProblem(beta=1.0, k=1, sign=2)


def test_tan_line_reference_root():
    (root,) = solve_tan_line(TanLineProblem(beta=INV_PI, k=1))
    assert root.c == pytest.approx(1.219, abs=1e-3)
    assert root.xi == pytest.approx(-2 * root.c + math.pi / 2 + 2 * math.pi, abs=1e-10)
    assert not root.tangent


def test_tan_line_k_zero():
    (root,) = solve_tan_line(TanLineProblem(beta=INV_PI, k=0))
    assert root.c == pytest.approx(math.pi / 4, abs=1e-13)
    assert root.xi == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("beta,k,sign", [(-0.05, 0, 1), (-0.05, 2, -1), (-0.3, 1, 1), (-2.0, -1, -1)])
def test_negative_beta_roots_solve_system(beta, k, sign):
    roots = solve_tan_line(TanLineProblem(beta=beta, k=k, sign=sign))
    # tan runs over every real on (-pi/2, pi/2) while the line stays bounded
    assert 1 <= len(roots) <= 3
    for root in roots:
        assert -math.pi / 2 < root.c < math.pi / 2
        assert tan_line_residual(beta, root.xi, root.c) <= 1e-10 * max(1.0, root.xi ** 2)


def test_increasing_line_three_roots():
    # tan(c) = 2c crosses at 0 and symmetrically on either side
    roots = solve_tan_equation(2.0, 0.0)
    assert len(roots) == 3
    assert roots[1][0] == pytest.approx(0.0, abs=1e-14)
    assert roots[0][0] == pytest.approx(-roots[2][0], abs=1e-12)


@settings(max_examples=1000)
@given(st.floats(0.01, 10.0), st.integers(-50, 50))
def test_positive_beta_has_unique_root(beta, k):
    problem = TanLineProblem(beta=beta, k=k)
    roots = solve_tan_line(problem)
    assert len(roots) == 1
    c = roots[0].c
    rhs = problem.rhs(c)
    assert abs(math.sin(c) - rhs * math.cos(c)) <= 1e-12 * max(1.0, abs(rhs))


@given(st.floats(0.01, 10.0), st.integers(-20, 20))
def test_sign_symmetry(beta, k):
    (plus,) = solve_tan_line(TanLineProblem(beta=beta, k=k, sign=1))
    (minus,) = solve_tan_line(TanLineProblem(beta=beta, k=-k, sign=-1))
    assert -minus.c == pytest.approx(plus.c, abs=1e-12)
    assert -minus.xi == pytest.approx(plus.xi, rel=1e-8, abs=1e-9)


def test_one_atom_reference_eigenvalues():
    pairs = {k: eigenpair_one_atom(INV_PI, k) for k in (-1, 0, 1, 2, 3)}
    assert pairs[0].b == 0.0
    assert pairs[0].fn.phases[0] == pytest.approx(math.pi / 4)
    assert pairs[1].b == pytest.approx(5.416, abs=1e-3)
    assert pairs[1].fn.phases[0] == pytest.approx(1.219, abs=1e-3)
    assert pairs[-1].b == pytest.approx(-4.112, abs=1e-3)
    assert pairs[1].eigenvalue == pytest.approx(-29.3, abs=0.05)
    assert pairs[2].eigenvalue == pytest.approx(-130.4, abs=0.05)
    # quoted to one decimal as -309.1; the root itself is -309.04555
    assert pairs[3].eigenvalue == pytest.approx(-309.0456, abs=1e-4)


def test_two_atom_reference_eigenvalues():
    minus_one = eigenpair_two_atoms(INV_PI, -1)
    assert minus_one.fn.phases[0] == pytest.approx(0.0, abs=1e-12)
    assert minus_one.b == pytest.approx(-math.pi, abs=1e-12)
    assert minus_one.fn.phases[1] == pytest.approx(3 * math.pi / 2, abs=1e-12)

    minus_two = eigenpair_two_atoms(INV_PI, -2)
    assert minus_two.fn.phases[0] == pytest.approx(-math.pi / 4, abs=1e-12)
    assert minus_two.b == pytest.approx(-2 * math.pi, abs=1e-12)

    for k, value in zip((1, 2, 3, 4), (21.8, 106.9, 267.2, 505.3)):
        assert -eigenpair_two_atoms(INV_PI, k).eigenvalue == pytest.approx(value, abs=0.05)


def test_domain_errors():
    with pytest.raises(DomainError):
        eigenpair_one_atom(0.0, 1)
    with pytest.raises(DomainError):
        eigenpair_two_atoms(-1.0, 1)
    with pytest.raises(DomainError):
        closed_form_spectrum(0.5, 3, -1, 1)
    with pytest.raises(DomainError):
        special_alpha_class(0.0)


def test_closed_form_spectrum_sorted():
    pairs = closed_form_spectrum(INV_PI, 2, -4, 4)
    assert len(pairs) == 9
    magnitudes = [abs(p.b) for p in pairs]
    assert magnitudes == sorted(magnitudes)
    assert pairs[0].k == 0


@pytest.mark.parametrize("m", [0, 1, 2])
def test_special_alpha_prime(m):
    alpha = 1 / (math.pi + 2 * math.pi * m)
    result = special_alpha_class(alpha)
    assert result.family == "alpha_prime"
    assert result.m == m
    assert result.family_k == -m - 1
    assert result.eigenvalue == pytest.approx(-1 / alpha ** 2)
    assert abs(eigenpair_two_atoms(alpha, -m - 1).b) == pytest.approx(1 / alpha, abs=1e-9)


@pytest.mark.parametrize("m", [1, 2])
def test_special_alpha_double_prime(m):
    alpha = 1 / (DOUBLE_PRIME_OFFSET + 2 * math.pi * m)
    result = special_alpha_class(alpha)
    assert result.family == "alpha_double_prime"
    assert result.m == m
    assert result.fn.phases[0] == pytest.approx(math.atan(2.0))
    assert eigenpair_two_atoms(alpha, m).b == pytest.approx(1 / alpha, abs=1e-9)


def test_ordinary_alpha_is_not_special():
    result = special_alpha_class(0.123)
    assert not result.matched
    assert result.fn is None


def test_family_index(one_atom, two_atoms):
    b1 = eigenpair_one_atom(INV_PI, 1).b
    b_minus = eigenpair_one_atom(INV_PI, -1).b
    assert family_index(one_atom, b1) == 1
    assert family_index(one_atom, abs(b_minus)) == -1
    assert family_index(one_atom, 0.0) == 0
    assert family_index(one_atom, 5.0) is None
    assert family_index(two_atoms, math.pi) == -1
    assert family_index(two_atoms, 2 * math.pi) == -2
    assert family_index(two_atom_measure(0.2).with_atoms([(0.3, 0.2), (1.0, 0.2)]), 1.0) is None
    assert family_index(one_atom_measure(0.3, z=0.5), b1) is None

from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from mollify.errors import DomainError
from mollify.exponents import (alpha_prop_d, alpha_thm_b, amplifier_lines, amplifier_optimum,
                               as_rational, delta_max, kmv_branches, kmv_effective_delta,
                               omega, prop_d_branches, prop_d_effective_delta,
                               spectral_deltas, x_amp)

THETA0 = F(7, 64)
thetas = st.fractions(min_value=0, max_value=F(1, 2), max_denominator=500).filter(
    lambda t: t < F(1, 2))


def test_published_values():
    assert delta_max(THETA0) == F(25, 668)
    assert delta_max(0) == F(1, 20)
    assert omega(THETA0) == F(25, 1208)
    assert omega(0) == F(1, 36)
    assert kmv_effective_delta() == F(1, 60)
    assert spectral_deltas(0) == (F(1, 32), F(1, 28))
    assert float(delta_max(THETA0)) == pytest.approx(0.03742, abs=1e-5)
    assert float(omega(THETA0)) == pytest.approx(0.020695, abs=5e-7)


def test_kmv_branches():
    assert kmv_branches() == (F(1, 60), F(1, 42))


def test_boundary_theta_half():
    assert delta_max(F(1, 2)) == 0
    with pytest.raises(DomainError):
        alpha_prop_d(F(1, 2))
    with pytest.raises(DomainError):
        delta_max(F(3, 5))
    with pytest.raises(DomainError):
        omega(F(-1, 10))


@pytest.mark.parametrize("bad", [0.1, "0.1", "1e-3", True])
def test_as_rational_rejects_floats(bad):
    with pytest.raises((TypeError, ValueError)):
        as_rational(bad)


def test_as_rational_accepts_literals():
    assert as_rational("7/64") == THETA0
    assert as_rational(" 3 ") == 3
    assert as_rational(F(1, 3)) == F(1, 3)


@pytest.mark.parametrize("theta", [F(0), THETA0])
def test_amplifier_min_max(theta):
    x_star, expo = amplifier_optimum(theta)
    assert x_star == (1 - 2 * theta) / (2 * (9 + 4 * theta)) == x_amp(theta)
    assert all(line(x_star) == expo for line in amplifier_lines(theta))
    assert expo == 1 - 2 * omega(theta)


def test_amplifier_at_zero():
    x_star, expo = amplifier_optimum(0)
    assert expo == F(17, 18)
    assert [line(x_star) for line in amplifier_lines(0)] == [F(17, 18)] * 3


def test_amplifier_symbolic_oracle():
    # solve the balance of the decreasing line against the second line with sympy
    th, x = sp.symbols("theta x")
    sol = sp.solve(sp.Eq(1 - x, sp.Rational(1, 2) + th + (8 + 4 * th) * x), x)[0]
    for theta in (F(0), THETA0, F(1, 5)):
        assert F(str(sol.subs(th, sp.Rational(theta.numerator, theta.denominator)))) == x_amp(theta)


@pytest.mark.parametrize("theta", [F(0), THETA0])
def test_prop_d_equalization(theta):
    assert prop_d_effective_delta(theta, alpha_prop_d(theta)) == delta_max(theta)


def test_prop_d_domain():
    with pytest.raises(DomainError):
        prop_d_branches(THETA0, F(1, 2))
    with pytest.raises(DomainError):
        prop_d_branches(THETA0, 1)


@given(thetas)
def test_delta_and_omega_relations(theta):
    assert 0 < omega(theta) < delta_max(theta) <= F(1, 20)
    assert alpha_thm_b(theta) < 1
    assert F(1, 2) + theta < alpha_prop_d(theta) < 1


@given(thetas, thetas)
def test_delta_max_decreasing(t1, t2):
    if t1 < t2:
        assert delta_max(t1) > delta_max(t2)
        assert omega(t1) > omega(t2)


@given(thetas)
def test_prop_d_branch_balance(theta):
    # the second branch increases in alpha and meets the first at alpha_prop_d
    a = alpha_prop_d(theta)
    first, second = prop_d_branches(theta, a)
    assert first == second
    lo = (F(1, 2) + theta + a) / 2
    assert prop_d_branches(theta, lo)[1] < second


@given(thetas)
def test_amplifier_optimum_general(theta):
    x_star, expo = amplifier_optimum(theta)
    assert expo == 1 - 2 * omega(theta)
    lines = amplifier_lines(theta)
    # moving off x* in either direction makes the max worse
    for dx in (F(-1, 10**4), F(1, 10**4)):
        assert max(ln(x_star + dx) for ln in lines) > expo

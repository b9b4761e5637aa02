import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import simpson

from mollify.errors import DivergentTail, DomainError, SingularPoint
from mollify.moment import (BoundResult, BoxParams, IntegralParams, MollifierPolynomial,
                            MomentParams, SignPair, default_p, eval_v,
                            i_alpha_beta_closed, i_alpha_beta_quadrature, j1, j2,
                            j2_detail, j2_envelope, log_v, long_range_main,
                            profile_integral, to_fraction, v_limit_at_origin, zero_bound)
from mollify.quadrature import sinc, sinhc

from oracles import cubic, log_v_simpson, v_simpson

DELTA_A = 25 / 668 - 1e-10
P044 = default_p(0.44)
PARAMS_A = MomentParams(DELTA_A, P044)


def test_to_fraction():
    assert to_fraction(0.44) == F(11, 25)
    assert to_fraction("7/64") == F(7, 64)
    with pytest.raises(ValueError):
        to_fraction(float("nan"))


@pytest.mark.parametrize("y", [0.44, 0.45, F(1, 2), 0.3])
def test_default_p_constraints(y):
    p = default_p(y)
    ups = to_fraction(y)
    assert p(ups) == 1 and p(0) == 0
    assert p.d1 and sum(c * ups ** k for k, c in enumerate(p.d1)) == 0


def test_default_p_half():
    assert default_p(F(1, 2)).coefficients == (0, 0, 12, -16)


def test_polynomial_rejects_violations():
    with pytest.raises(DomainError):
        MollifierPolynomial((0, 0, 1), F(1, 2))
    with pytest.raises(DomainError):
        default_p(1.0)


def test_moment_params_validation():
    with pytest.raises(DomainError):
        MomentParams(0.0, P044)
    assert not MomentParams(1e3, P044).in_regime


def test_eval_v_symmetry_example():
    assert eval_v(1.5, -3.0, PARAMS_A) == eval_v(1.5, 3.0, PARAMS_A)
    assert eval_v(1, 2, PARAMS_A) >= 1


def test_eval_v_simpson_example():
    assert eval_v(1, 1, PARAMS_A) == pytest.approx(v_simpson(1, 1, DELTA_A, 0.44), rel=1e-9)


def test_singular_point_and_limit():
    with pytest.raises(SingularPoint):
        eval_v(0, 0, PARAMS_A)
    lim = eval_v(0, 0, PARAMS_A, limit=True)
    assert lim == v_limit_at_origin(PARAMS_A)
    # the approach is first order in u
    assert eval_v(1e-8, 1e-8, PARAMS_A) == pytest.approx(lim, rel=1e-7)
    assert eval_v(0.0, 1e-8, PARAMS_A) == pytest.approx(lim, rel=1e-12)
    # limit formula: 1 + int P''^2 / (24 Delta^3)
    _, _, p2 = cubic(0.44)
    x = np.linspace(0, 0.44, 10_001)
    assert lim == pytest.approx(1 + simpson(p2(x) ** 2, x=x) / (24 * DELTA_A ** 3), rel=1e-12)


@pytest.mark.parametrize("u, v", [(0.0, 2.0), (0.0, 1e-3), (-3.0, 0.0), (5.0, 0.0), (0.3, 0.4)])
def test_axes_and_small_arguments(u, v):
    assert eval_v(u, v, PARAMS_A) == pytest.approx(v_simpson(u, v, DELTA_A, 0.44), rel=1e-9)


def test_large_arguments_do_not_overflow():
    assert eval_v(700.0, 1.0, PARAMS_A) >= 1.0
    assert math.isfinite(log_v(-2000.0, 3.0, PARAMS_A))
    assert log_v(-2000.0, 3.0, PARAMS_A) > 1000


@given(st.floats(-30, 30), st.floats(-30, 30))
def test_log_v_matches_simpson(u, v):
    if u * u + v * v < 1e-6:
        return
    assert log_v(u, v, PARAMS_A) == pytest.approx(log_v_simpson(u, v, DELTA_A, 0.44),
                                                  rel=1e-8, abs=1e-12)


@given(st.floats(-30, 30), st.floats(0, 30), st.floats(0.01, 0.24), st.floats(0.2, 0.8))
def test_v_at_least_one_and_even_in_v(u, v, delta, ups):
    if u * u + v * v < 1e-12:
        return
    p = MomentParams(delta, default_p(ups))
    val = eval_v(u, v, p)
    assert val >= 1.0
    assert eval_v(u, -v, p) == val


def test_large_delta_limit_only_for_nonnegative_u():
    big = MomentParams(1e3, P044)
    assert eval_v(1.0, 2.0, big) - 1 < 1e-6
    assert eval_v(0.0, 2.0, big) - 1 < 1e-2          # O(1/Delta) on the axis
    # for u < 0 the weight exp(-2 u Delta (1 - x)) wins instead
    assert eval_v(-1.0, 2.0, big) == math.inf
    assert log_v(-1.0, 2.0, big) > 1000


def test_profile_integral_matches_direct():
    _, p1, p2 = cubic(0.44)
    for u, v in [(2.0, 1.0), (-3.0, 0.5), (0.0, 4.0)]:
        x = np.linspace(0, 0.44, 20_001)
        w = 1 / (2 * complex(u, v) * DELTA_A)
        ref = simpson(np.exp(-2 * u * DELTA_A * (1 - x)) * np.abs(p1(x) + p2(x) * w) ** 2, x=x)
        assert profile_integral(u, v, DELTA_A, P044) == pytest.approx(ref, rel=1e-10)


# -- J1 / J2 / zero bound ------------------------------------------------------

def _box_a():
    b = math.pi / (4 * DELTA_A * (1 - 0.44) - 1e-10)
    return BoxParams(b, 23.0)


def test_j1_against_simpson():
    box = _box_a()
    t = np.linspace(0, box.b_tilde, 4001)
    vals = np.array([math.cos(math.pi * s / (2 * box.b_tilde))
                     * log_v_simpson(-23.0, s, DELTA_A, 0.44, 2000) for s in t])
    assert j1(box, PARAMS_A) == pytest.approx(simpson(vals, x=t), rel=1e-7)


def test_j2_truncation_doubling_stable():
    box = _box_a()
    res = j2_detail(box, PARAMS_A)
    assert res.tail_bound < 1e-12
    # integrate one more doubling explicitly
    from mollify.kernels import j2_integrand_many
    from mollify.quadrature import integrate_finite
    p = P044
    extra, _ = integrate_finite(
        lambda x: j2_integrand_many(x, 23.0, box.b_tilde, DELTA_A, 0.44, p.fwd, p.bwd),
        res.truncation, 2 * res.truncation, vectorized=True)
    assert abs(extra) < 1e-8


def test_j2_envelope_dominates_integrand():
    from mollify.kernels import j2_integrand_many
    box = _box_a()
    env = j2_envelope(box, PARAMS_A)
    xs = np.geomspace(env.cutoff, 1e5, 400)
    vals = j2_integrand_many(xs, 23.0, box.b_tilde, DELTA_A, 0.44, P044.fwd, P044.bwd)
    bound = env.amplitude * np.exp(-env.exponential_rate * xs) / xs ** 4
    assert np.all(np.abs(vals) <= bound)


def test_j2_divergent_below_threshold():
    b = math.pi / (4 * DELTA_A * (1 - 0.44)) * 0.9
    with pytest.raises(DivergentTail):
        j2(BoxParams(b, 23.0), PARAMS_A)


def test_j_values_small_for_large_delta_and_small_c():
    params = MomentParams(1e3, P044)
    box = BoxParams(math.pi / (4 * 1e3 * 0.56) * 1.001, 0.01)
    assert 0 <= j1(box, params) <= 1e-2
    assert 0 <= j2(box, params) <= 1e-2


def test_j_values_grow_with_c_at_large_delta():
    # log V(-c, t) ~ 2 c Delta (1 - Y) and b ~ pi / (4 Delta (1 - Y)), so J1 is O(c)
    params = MomentParams(1e3, P044)
    box = BoxParams(math.pi / (4 * 1e3 * 0.56) * 1.001, 1.0)
    assert 1.0 < j1(box, params) < 3.0
    with pytest.raises(DomainError):
        j2(box, params)


def test_theorem_a_values(theorem_a):
    r = theorem_a
    assert 4.89 <= r.bound <= 4.93
    assert r.N == 4
    assert 9.78 <= r.rank_bound <= 9.86
    assert 0.016 <= r.proportion <= 0.022
    assert r.rank_bound == 2 * r.bound
    assert r.j1 > 0 and r.j2 > 0


def test_ramanujan_values(ramanujan_case):
    r = ramanujan_case
    assert 3.81 <= r.bound <= 3.85
    assert r.N == 3
    assert 7.62 <= r.rank_bound <= 7.70
    assert 0.035 <= r.proportion <= 0.050


def test_zero_bound_continuity_probe(theorem_a):
    probe = zero_bound(0.44, 23.0 * 1.1, DELTA_A, 1e-10)
    assert abs(probe.bound - theorem_a.bound) < 1


def test_zero_bound_domain():
    with pytest.raises(DomainError):
        zero_bound(0.44, 23.0, 0.3, 1e-10)
    with pytest.raises(DomainError):
        zero_bound(0.44, 23.0, DELTA_A, 0.0)


@pytest.mark.parametrize("bound, n", [(4.9, 4), (3.2, 3), (0.5, 0)])
def test_bound_result_selection(bound, n):
    r = BoundResult.from_bound(bound)
    assert r.N == n and bound / (n + 1) < 1 <= bound / n if n else True
    assert r.proportion == pytest.approx(1 - bound / (n + 1))


# -- long-range integral --------------------------------------------------------

MUS = [complex(1, 2) / 10, complex(3, -1) / 20, complex(0.05, 0.2), complex(-0.1, 0.3),
       complex(0.2, -0.05)]


@pytest.mark.parametrize("mu", MUS)
def test_closed_vs_quadrature_pp(mu):
    ip = IntegralParams(10.0, mu)
    closed = i_alpha_beta_closed(SignPair("PP"), ip, P044)
    quad = i_alpha_beta_quadrature(SignPair("PP"), ip, P044)
    assert abs(closed - quad) <= 1e-9 * abs(closed)


@given(st.complex_numbers(max_magnitude=0.6, allow_nan=False, allow_infinity=False),
       st.floats(2, 30), st.sampled_from(SignPair.TAGS))
def test_closed_vs_quadrature_all_pairs(mu, log_l, tag):
    if abs(mu) < 1e-3:
        return
    ip = IntegralParams(log_l, mu)
    closed = i_alpha_beta_closed(SignPair(tag), ip, P044)
    quad = i_alpha_beta_quadrature(SignPair(tag), ip, P044)
    assert abs(closed - quad) <= 1e-9 * (1 + abs(closed))


def test_pure_imaginary_mu_has_no_boundary_term():
    ip = IntegralParams(10.0, 0.3j)
    pp = i_alpha_beta_closed(SignPair("PP"), ip, P044)
    mm = i_alpha_beta_closed(SignPair("MM"), ip, P044)
    assert pp == mm


def test_non_pp_pairs_identical():
    ip = IntegralParams(10.0, MUS[0])
    vals = {t: i_alpha_beta_closed(SignPair(t), ip, P044) for t in ("MP", "PM", "MM")}
    assert len(set(vals.values())) == 1


def _pair_sum(ip, log_q):
    mu = ip.mu
    total = 0
    for pair in SignPair.all():
        a, b = pair.shifts(mu)
        total += (math.exp((-2 * ip.tau) * log_q) * np.exp((a + b) * log_q)
                  / (4 * a * b * (a + b)) * i_alpha_beta_closed(pair, ip, P044))
    return total


@pytest.mark.parametrize("mu", MUS[:3])
def test_long_range_main_against_pair_sum(mu):
    # the pair sum reproduces the display up to the factor q^(-2 tau) on the
    # J-part; the boundary summand is untouched
    ip, log_q = IntegralParams(10.0, mu), 7.0
    lterm = math.exp(-2 * ip.tau * 10.0 * (1 - 0.44))
    total = _pair_sum(ip, log_q)
    assert abs(total.imag) < 1e-12
    main = long_range_main(ip, log_q, P044)
    assert (total.real - lterm) * math.exp(2 * ip.tau * log_q) + lterm == pytest.approx(main, rel=1e-9)


@pytest.mark.parametrize("mu", MUS[:3])
def test_v_relates_to_long_range_main(mu):
    # V(u, v) - 1 = q^(-2 tau) (main - L^(-2 tau (1-Y))) with u = 2 tau log q, v = 2 t log q
    log_q, log_l = 7.0, 10.0
    ip = IntegralParams(log_l, mu)
    params = MomentParams(log_l / (2 * log_q), P044)
    v = eval_v(2 * ip.tau * log_q, 2 * ip.t * log_q, params)
    lterm = math.exp(-2 * ip.tau * log_l * (1 - 0.44))
    main = long_range_main(ip, log_q, P044)
    assert v - 1 == pytest.approx(math.exp(-2 * ip.tau * log_q) * (main - lterm), rel=1e-10)


def test_long_range_sine_zero():
    log_q, log_l = 7.0, 10.0
    t = math.pi / (2 * log_q)
    ip = IntegralParams(log_l, complex(0.1, t))
    assert sinc(2 * t * log_q) == pytest.approx(0, abs=1e-15)
    first = 2 * log_q * sinhc(2 * 0.1 * log_q) / log_l
    J = profile_integral(0.1 * log_l, t * log_l, 1.0, P044)
    lterm = math.exp(-2 * 0.1 * log_l * 0.56)
    assert long_range_main(ip, log_q, P044) == pytest.approx(first * J + lterm, rel=1e-12)


def test_long_range_domain():
    with pytest.raises(DomainError):
        long_range_main(IntegralParams(10.0, 0.2), 7.0, P044)
    with pytest.raises(DomainError):
        IntegralParams(10.0, 0)

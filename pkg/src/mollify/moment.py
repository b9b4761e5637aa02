"""The main-term functional V(u, v), the box integrals J1/J2, the long-range
integral I_{alpha,beta} and the zero-counting bound built from them.

V(u, v) = 1 + (e^-u / Delta) (sinh u/u - sin v/v)
              * int_0^Y e^(-2u Delta (1-x)) |P'(x) + P''(x) / (2(u+iv)Delta)|^2 dx

The integral is evaluated in closed form through exponential moments (see
``_kernels_py``); only J1, J2 and the I_{alpha,beta} oracle use quadrature.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from ._kernels_py import moments
from .errors import DivergentTail, DomainError, SingularPoint
from .quadrature import (QuadratureSpec, TailEnvelope, integrate_finite,
                         semi_infinite_detail, sinc, sinhc)

logger = logging.getLogger(__name__)

__all__ = [
    "MollifierPolynomial",
    "MomentParams",
    "BoxParams",
    "SignPair",
    "IntegralParams",
    "BoundResult",
    "default_p",
    "eval_v",
    "v_limit_at_origin",
    "j1",
    "j2",
    "j2_envelope",
    "zero_bound",
    "profile_integral",
    "i_alpha_beta_quadrature",
    "i_alpha_beta_closed",
    "long_range_main",
]


def to_fraction(x) -> Fraction:
    """Exact rational from ints, Fractions, 'p/q' strings or floats.

    Floats go through their shortest repr, so 0.44 becomes 11/25.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x}")
        return Fraction(repr(x))
    return Fraction(repr(float(x)))


# -- exact univariate helpers (coefficient lists, lowest degree first) -------

def _trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _deriv(c):
    return _trim([k * c[k] for k in range(1, len(c))] or [Fraction(0)])


def _mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _eval(c, x):
    acc = Fraction(0) if isinstance(x, Fraction) else 0.0
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _compose_affine(c, alpha, beta):
    """Coefficients of c(alpha + beta*s) in s."""
    out = [Fraction(0)]
    lin = [alpha, beta]
    for coef in reversed(c):
        out = _mul(out, lin)
        out[0] += coef
    return _trim(out)


def _integrate(c, a, b):
    anti = [Fraction(0)] + [c[k] / (k + 1) for k in range(len(c))]
    return _eval(anti, b) - _eval(anti, a)


@dataclass(frozen=True)
class MollifierPolynomial:
    """P with P(0) = P'(0) = P'(Y) = 0 and P(Y) = 1, coefficients exact."""

    coefficients: tuple
    upsilon: Fraction

    def __post_init__(self):
        coeffs = tuple(_trim([to_fraction(c) for c in self.coefficients]))
        ups = to_fraction(self.upsilon)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "upsilon", ups)
        if not 0 < ups < 1:
            raise DomainError(f"upsilon={ups} outside (0, 1)")
        d1 = _deriv(list(coeffs))
        checks = {
            "P(0) = 0": _eval(coeffs, Fraction(0)) == 0,
            "P'(0) = 0": _eval(d1, Fraction(0)) == 0,
            "P'(Y) = 0": _eval(d1, ups) == 0,
            "P(Y) = 1": _eval(coeffs, ups) == 1,
        }
        failed = [name for name, ok in checks.items() if not ok]
        if failed:
            raise DomainError("mollifier polynomial violates " + ", ".join(failed))

    @property
    def upsilon_float(self) -> float:
        return float(self.upsilon)

    @cached_property
    def d1(self) -> list:
        return _deriv(list(self.coefficients))

    @cached_property
    def d2(self) -> list:
        return _deriv(self.d1)

    def __call__(self, x):
        return _eval(self.coefficients, x)

    @cached_property
    def _profile_coeffs(self):
        # rows Y*Q_i(Y*s) (fwd) and Y*Q_i(Y*(1-s)) (bwd), Q = P'^2, P'P'', P''^2
        quads = [_mul(self.d1, self.d1), _mul(self.d1, self.d2), _mul(self.d2, self.d2)]
        y = self.upsilon
        width = max(len(q) for q in quads)
        fwd = np.zeros((3, width))
        bwd = np.zeros((3, width))
        for i, q in enumerate(quads):
            f = _compose_affine(q, Fraction(0), y)
            g = _compose_affine(q, y, -y)
            for k, c in enumerate(f):
                fwd[i, k] = float(y * c)
            for k, c in enumerate(g):
                bwd[i, k] = float(y * c)
        return fwd, bwd

    @property
    def fwd(self) -> np.ndarray:
        return self._profile_coeffs[0]

    @property
    def bwd(self) -> np.ndarray:
        return self._profile_coeffs[1]

    @cached_property
    def second_derivative_bound(self) -> float:
        """A rigorous upper bound for max |P''| on [0, Y]."""
        d2 = self.d2
        y = self.upsilon
        if len(d2) <= 2:
            exact = max(abs(_eval(d2, Fraction(0))), abs(_eval(d2, y)))
        else:
            exact = sum(abs(c) * y ** k for k, c in enumerate(d2))
        return float(exact) * (1 + 1e-15)

    @cached_property
    def float_coeffs(self):
        """Float coefficient arrays (highest degree first) of P, P', P''."""
        return tuple(np.array([float(c) for c in reversed(p)])
                     for p in (list(self.coefficients), self.d1, self.d2))


def default_p(upsilon) -> MollifierPolynomial:
    """P(x) = 3(x/Y)^2 - 2(x/Y)^3."""
    y = to_fraction(upsilon)
    if not 0 < y < 1:
        raise DomainError(f"upsilon={y} outside (0, 1)")
    return MollifierPolynomial((0, 0, 3 / y ** 2, -2 / y ** 3), y)


@dataclass(frozen=True)
class MomentParams:
    delta: float
    poly: MollifierPolynomial

    def __post_init__(self):
        d = float(self.delta)
        object.__setattr__(self, "delta", d)
        if not d > 0 or not math.isfinite(d):
            raise DomainError(f"delta={d} must be positive")

    @property
    def in_regime(self) -> bool:
        """Whether 0 < Delta < 1/4, the range used for the zero bound."""
        return self.delta < 0.25


@dataclass(frozen=True)
class BoxParams:
    b_tilde: float
    c_tilde: float

    def __post_init__(self):
        if not (self.b_tilde > 0 and self.c_tilde > 0):
            raise DomainError("box parameters must be positive")


def v_limit_at_origin(params: MomentParams) -> float:
    """The removable-singularity value 1 + (1/(24 Delta^3)) int_0^Y P''^2."""
    p = params.poly
    integral = _integrate(_mul(p.d2, p.d2), Fraction(0), p.upsilon)
    return 1.0 + float(integral) / (24.0 * params.delta ** 3)


def eval_v(u: float, v: float, params: MomentParams, limit: bool = False) -> float:
    """V(u, v); raises SingularPoint at the origin unless ``limit`` is set."""
    u, v = float(u), float(v)
    if u == 0.0 and v == 0.0:
        if limit:
            return v_limit_at_origin(params)
        raise SingularPoint("V(0, 0) requested; pass limit=True for the limit value")
    p = params.poly
    mant, ls = kernels.v_excess(u, v, params.delta, p.upsilon_float, p.fwd, p.bwd)
    if mant == 0.0:
        return 1.0
    try:
        return 1.0 + mant * math.exp(ls)
    except OverflowError:       # use log_v for such arguments
        return math.inf


def log_v(u: float, v: float, params: MomentParams) -> float:
    """log V(u, v), overflow-free for large |u|."""
    if u == 0.0 and v == 0.0:
        raise SingularPoint("log V(0, 0) requested")
    p = params.poly
    return kernels.log_v(float(u), float(v), params.delta, p.upsilon_float, p.fwd, p.bwd)


def j1(box: BoxParams, params: MomentParams, spec: QuadratureSpec | None = None) -> float:
    """int_0^b cos(pi t/2b) log V(-c, t) dt."""
    p = params.poly
    b, c = float(box.b_tilde), float(box.c_tilde)

    def f(t):
        return kernels.j1_integrand_many(t, c, b, params.delta, p.upsilon_float,
                                         p.fwd, p.bwd)

    value, err = integrate_finite(f, 0.0, b, spec, vectorized=True)
    logger.debug("J1 = %.15g (err %.2e)", value, err)
    return value


def j2_envelope(box: BoxParams, params: MomentParams) -> TailEnvelope:
    """Certified decay of the J2 integrand.

    For x >= max(2c, c+1) write u = x - c, so u >= 1 and u >= x/2.  Then
    e^-u (sinh u/u - sin v/v) <= 1/u, |P'(y)| <= M2 (Y - y) because P'(Y) = 0,
    and |w| <= 1/(2u Delta), giving
        V - 1 <= (3/4) M2^2 e^(-2u Delta (1-Y)) / (Delta^4 u^4).
    With sinh(kx) <= e^(kx)/2 and 1/u^4 <= 16/x^4 the integrand is at most
        6 M2^2 e^(2c Delta (1-Y)) / Delta^4 * e^(-rate x) / x^4,
    rate = 2 Delta (1-Y) - pi/(2b).
    """
    d = params.delta
    y = params.poly.upsilon_float
    b, c = float(box.b_tilde), float(box.c_tilde)
    rate = 2.0 * d * (1.0 - y) - math.pi / (2.0 * b)
    if rate < 0.0:
        raise DivergentTail(
            f"net exponential rate {rate:.3e} < 0: b_tilde={b} is below "
            f"pi/(4 Delta (1 - Y)) = {math.pi / (4.0 * d * (1.0 - y))}")
    m2 = params.poly.second_derivative_bound
    growth = 2.0 * c * d * (1.0 - y)
    if growth > 700.0:
        # the integrand itself reaches about e^growth
        raise DomainError(f"J2 exceeds the floating-point range (log size ~ {growth:.0f})")
    amplitude = 6.0 * m2 * m2 * math.exp(growth) / d ** 4
    return TailEnvelope(amplitude=amplitude, exponential_rate=rate,
                        polynomial_power=4.0, cutoff=max(2.0 * c, c + 1.0))


def j2_detail(box: BoxParams, params: MomentParams, spec: QuadratureSpec | None = None):
    env = j2_envelope(box, params)
    p = params.poly
    b, c = float(box.b_tilde), float(box.c_tilde)

    def f(x):
        return kernels.j2_integrand_many(x, c, b, params.delta, p.upsilon_float,
                                         p.fwd, p.bwd)

    return semi_infinite_detail(f, 0.0, env, spec, vectorized=True)


def j2(box: BoxParams, params: MomentParams, spec: QuadratureSpec | None = None) -> float:
    """int_0^inf sinh(pi x/2b) log V(x - c, b) dx with a certified tail."""
    res = j2_detail(box, params, spec)
    logger.debug("J2 = %.15g (err %.2e, T = %.3g)", res.value, res.error, res.truncation)
    return res.value


@dataclass(frozen=True)
class BoundResult:
    bound: float
    N: int
    proportion: float
    rank_bound: float
    j1: float = field(default=float("nan"), compare=False)
    j2: float = field(default=float("nan"), compare=False)
    b_tilde: float = field(default=float("nan"), compare=False)
    delta: float = field(default=float("nan"), compare=False)

    @classmethod
    def from_bound(cls, bound: float, **extra) -> "BoundResult":
        n = math.floor(bound)           # smallest N with bound/(N+1) < 1
        return cls(bound=bound, N=n, proportion=1.0 - bound / (n + 1),
                   rank_bound=2.0 * bound, **extra)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("bound", "N", "proportion", "rank_bound", "j1", "j2", "b_tilde", "delta")}


def zero_bound(upsilon, c_tilde: float, delta: float, guard: float,
               spec: QuadratureSpec | None = None) -> BoundResult:
    """(J1 + J2) / (8 b sinh(pi c / 2b)) with b = pi / (4 Delta (1-Y) - guard)."""
    if not guard > 0:
        raise DomainError("guard must be positive")
    poly = default_p(upsilon)
    params = MomentParams(delta, poly)
    if not params.in_regime:
        raise DomainError(f"delta={delta} outside (0, 1/4)")
    y = poly.upsilon_float
    denom = 4.0 * params.delta * (1.0 - y) - guard
    if not denom > 0:
        raise DomainError("guard too large for this delta and upsilon")
    b = math.pi / denom
    box = BoxParams(b, float(c_tilde))
    v1 = j1(box, params, spec)
    v2 = j2(box, params, spec)
    bound = (v1 + v2) / (8.0 * b * math.sinh(math.pi * box.c_tilde / (2.0 * b)))
    return BoundResult.from_bound(bound, j1=v1, j2=v2, b_tilde=b, delta=params.delta)


# -- long-range integral ------------------------------------------------------

class SignPair:
    """One of the four shift selections (alpha, beta) = (+-mu, +-conj(mu))."""

    TAGS = ("PP", "MP", "PM", "MM")

    def __init__(self, tag: str):
        if tag not in self.TAGS:
            raise ValueError(f"unknown sign pair {tag!r}")
        self.tag = tag

    def __repr__(self):
        return f"SignPair({self.tag!r})"

    def __eq__(self, other):
        return isinstance(other, SignPair) and other.tag == self.tag

    def __hash__(self):
        return hash(self.tag)

    def shifts(self, mu: complex) -> tuple[complex, complex]:
        sa = 1 if self.tag[0] == "P" else -1
        sb = 1 if self.tag[1] == "P" else -1
        return sa * mu, sb * mu.conjugate()

    @classmethod
    def all(cls) -> list["SignPair"]:
        return [cls(t) for t in cls.TAGS]


@dataclass(frozen=True)
class IntegralParams:
    log_L: float
    mu: complex

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        if not self.log_L > 0:
            raise DomainError("log_L must be positive")
        if self.mu == 0:
            raise DomainError("mu must be non-zero")

    @property
    def tau(self) -> float:
        return self.mu.real

    @property
    def t(self) -> float:
        return self.mu.imag


def profile_integral(u: float, v: float, delta: float, poly: MollifierPolynomial) -> float:
    """int_0^Y e^(-2u Delta (1-x)) |P' + P''/(2(u+iv)Delta)|^2 dx, closed form."""
    r2 = u * u + v * v
    if r2 == 0:
        raise SingularPoint("profile integral needs u + iv != 0")
    y = poly.upsilon_float
    rew = u / (2.0 * delta * r2)
    absw2 = 1.0 / (4.0 * delta * delta * r2)
    if u >= 0:
        coef, b, log_w = poly.bwd, 2.0 * u * delta * y, -2.0 * u * delta * (1.0 - y)
    else:
        coef, b, log_w = poly.fwd, -2.0 * u * delta * y, -2.0 * u * delta
    mom = moments(b, coef.shape[1] - 1)
    s = math.fsum((coef[0, n] + 2.0 * rew * coef[1, n] + absw2 * coef[2, n]) * mom[n]
                  for n in range(coef.shape[1]))
    return math.exp(log_w) * s


def i_alpha_beta_quadrature(pair: SignPair, ip: IntegralParams, poly: MollifierPolynomial,
                            spec: QuadratureSpec | None = None) -> complex:
    """log L int_0^Y L^(-2 tau (1-x)) prod_z [...] dx by direct quadrature."""
    mu, lL = ip.mu, ip.log_L
    alpha, beta = pair.shifts(mu)
    p0, p1, p2 = poly.float_coeffs
    zs = (mu, mu.conjugate())

    def integrand(x):
        px, p1x, p2x = np.polyval(p0, x), np.polyval(p1, x), np.polyval(p2, x)
        prod = np.ones_like(x, dtype=complex)
        for z in zs:
            prod = prod * ((z + alpha) * (z + beta) * px
                           + (2 * z + alpha + beta) * p1x / lL + p2x / lL ** 2)
        return np.exp(-2.0 * ip.tau * lL * (1.0 - x)) * prod

    y = poly.upsilon_float
    spec = spec or QuadratureSpec()
    re, _ = integrate_finite(lambda x: integrand(x).real, 0.0, y, spec, vectorized=True)
    # the imaginary part may vanish identically; measure it against |re|
    im_spec = QuadratureSpec(max(spec.abs_tol, spec.rel_tol * abs(re)), spec.rel_tol,
                             spec.max_subdivisions)
    im, _ = integrate_finite(lambda x: integrand(x).imag, 0.0, y, im_spec, vectorized=True)
    return lL * complex(re, im)


def i_alpha_beta_closed(pair: SignPair, ip: IntegralParams,
                        poly: MollifierPolynomial) -> complex:
    """(4|mu|^2/log L) J + [PP] 8|mu|^2 tau L^(-2 tau (1-Y))."""
    mu, lL, tau = ip.mu, ip.log_L, ip.tau
    mod2 = abs(mu) ** 2
    J = profile_integral(tau * lL, ip.t * lL, 1.0, poly)
    value = 4.0 * mod2 / lL * J
    if pair.tag == "PP":
        value += 8.0 * mod2 * tau * math.exp(-2.0 * tau * lL * (1.0 - poly.upsilon_float))
    return complex(value)


def long_range_main(ip: IntegralParams, log_q: float, poly: MollifierPolynomial) -> float:
    """((q^2tau - q^-2tau)/(2 tau log L) - sin(2t log q)/(t log L)) J + L^(-2tau(1-Y)).

    Both difference quotients go through sinhc/sinc, so small tau or t is safe.
    """
    tau, t, lL = ip.tau, ip.t, ip.log_L
    if tau == 0 or t == 0:
        raise DomainError("long_range_main needs tau != 0 and t != 0")
    if not log_q > 0:
        raise DomainError("log_q must be positive")
    first = 2.0 * log_q * sinhc(2.0 * tau * log_q) / lL
    second = 2.0 * log_q * sinc(2.0 * t * log_q) / lL
    J = profile_integral(tau * lL, t * lL, 1.0, poly)
    return (first - second) * J + math.exp(-2.0 * tau * lL * (1.0 - poly.upsilon_float))

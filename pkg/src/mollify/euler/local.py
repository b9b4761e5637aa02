"""Local (single prime) factors of the mollified-moment main term.

Variables: Q = 1/p, U = p^-mu, V = p^-conj(mu), L = lambda_g(p), and a
free slot Y for p^-s in the standard Euler factors.  Derived monomials:
T = QUV = p^-(1+mu+conj(mu)), X_mu = QU^2, X_mubar = QV^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import DenominatorMismatch
from .poly import LOCAL_VARS, Poly, RationalFunction, local_const, local_var

__all__ = [
    "PrimeClass", "SPLIT", "RAMIFIED", "AT_Q", "prime_class",
    "TruncatedSeries", "hecke_lambda_power", "s_series", "s_rational",
    "s_denominator", "nu_g", "phi_local", "k_local", "x_monomial",
    "shift_monomial", "l_zero", "l_one", "l_tilde", "rankin_local",
    "sym2_local", "satake_reduce", "local_zeta", "T_MONOMIAL",
]

Q, U, V, LAM, Y = (local_var(n) for n in LOCAL_VARS)
ONE = local_const(1)
T_MONOMIAL = Q * U * V


@dataclass(frozen=True)
class PrimeClass:
    tag: str
    eps_D: int
    eps_q: int

    @property
    def eps_qD(self) -> int:
        return self.eps_D * self.eps_q


SPLIT = PrimeClass("split", 1, 1)          # p does not divide qD
RAMIFIED = PrimeClass("ramified", 0, 1)    # p | D, p != q
AT_Q = PrimeClass("at_q", 1, 0)            # p = q
_CLASSES = {c.tag: c for c in (SPLIT, RAMIFIED, AT_Q)}


def prime_class(tag) -> PrimeClass:
    if isinstance(tag, PrimeClass):
        return tag
    try:
        return _CLASSES[tag]
    except KeyError:
        raise ValueError(f"unknown prime class {tag!r}") from None


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_{k < order} coefficients[k] * T^k."""

    order: int
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) > self.order:
            raise ValueError("more coefficients than the truncation order")

    def coefficient(self, k: int) -> Poly:
        if k >= self.order:
            raise IndexError("coefficient beyond truncation order")
        if k < len(self.coefficients):
            return self.coefficients[k]
        return local_const(0)

    def mul_t_poly(self, coeffs: list) -> "TruncatedSeries":
        """Product with sum_j coeffs[j] T^j, truncated at the same order."""
        out = []
        for k in range(self.order):
            acc = local_const(0)
            for j, c in enumerate(coeffs):
                if j <= k and k - j < len(self.coefficients):
                    acc = acc + c * self.coefficients[k - j]
            out.append(acc)
        return TruncatedSeries(self.order, tuple(out))


@lru_cache(maxsize=None)
def _lambda_powers(k_max: int, eps_D: int) -> tuple:
    vals = [ONE, LAM]
    for k in range(1, k_max):
        vals.append(LAM * vals[k] - eps_D * vals[k - 1])
    return tuple(vals[: k_max + 1])


def hecke_lambda_power(k: int, cls) -> Poly:
    """lambda(p^k) via lambda(p^(k+1)) = lambda lambda(p^k) - eps_D lambda(p^(k-1))."""
    cls = prime_class(cls)
    if not 0 <= k <= 64:
        raise ValueError("k must lie in [0, 64]")
    return _lambda_powers(max(k, 1), cls.eps_D)[k]


def s_series(a: int, b: int, cls, K: int = 24) -> TruncatedSeries:
    """S(a,b) = sum_k lambda(p^(k+a)) lambda(p^(k+b)) T^k, truncated at K."""
    cls = prime_class(cls)
    if not (0 <= a <= 8 and 0 <= b <= 8):
        raise ValueError("a, b must lie in [0, 8]")
    if K < 8:
        raise ValueError("K must be >= 8")
    lp = _lambda_powers(K + a + b + 1, cls.eps_D)
    return TruncatedSeries(K, tuple(lp[k + a] * lp[k + b] for k in range(K)))


def s_denominator(cls) -> list:
    """Coefficients (in T) of (1 - eps_D T)(1 - (L^2 - 2 eps_D) T + eps_D^2 T^2)."""
    e = prime_class(cls).eps_D
    first = [ONE, local_const(-e)]
    second = [ONE, -(LAM * LAM - 2 * e), local_const(e * e)]
    out = [local_const(0)] * 4
    for i, x in enumerate(first):
        for j, y in enumerate(second):
            out[i + j] = out[i + j] + x * y
    return out


def _t_poly(coeffs: list) -> Poly:
    out = local_const(0)
    tk = ONE
    for c in coeffs:
        out = out + c * tk
        tk = tk * T_MONOMIAL
    return out


NUM_DEGREE_BOUND = 2


@lru_cache(maxsize=None)
def _s_rational_parts(a: int, b: int, tag: str, K: int):
    cls = prime_class(tag)
    den = s_denominator(cls)
    prod = s_series(a, b, cls, K).mul_t_poly(den)
    for k in range(NUM_DEGREE_BOUND + 1, K):
        if not prod.coefficient(k).is_zero():
            raise DenominatorMismatch(
                f"S({a},{b}) for {tag}: coefficient of T^{k} in S*D is "
                f"{prod.coefficient(k)}, expected 0")
    num = [prod.coefficient(k) for k in range(NUM_DEGREE_BOUND + 1)]
    return num, den


def s_rational(a: int, b: int, cls, K: int = 24) -> RationalFunction:
    """S(a,b) as a certified rational function of (T = QUV, L)."""
    cls = prime_class(cls)
    if K < 8:
        raise ValueError("K must be >= 8")
    num, den = _s_rational_parts(a, b, cls.tag, K)
    e = cls.eps_D
    atoms = [(ONE - e * T_MONOMIAL, 1),
             (ONE - (LAM * LAM - 2 * e) * T_MONOMIAL + e * e * T_MONOMIAL ** 2, 1)]
    return RationalFunction(_t_poly(num), atoms)


@lru_cache(maxsize=None)
def _nu(k: int, tag: str, K: int) -> RationalFunction:
    if k == 0:
        return RationalFunction(ONE)
    total = RationalFunction(local_const(0))
    for i in range(k + 1):
        j = k - i
        if i < j:
            continue
        # S(i, j) = S(j, i); pair the monomials U^i V^j + U^j V^i
        mono = U ** i * V ** j + (U ** j * V ** i if i != j else 0)
        total = total + mono * s_rational(i, j, tag, K)
    return total / s_rational(0, 0, tag, K)


def nu_g(k: int, cls, K: int = 24) -> RationalFunction:
    """nu_g(p^k; mu, conj(mu)) for 0 <= k <= 4."""
    if not 0 <= k <= 4:
        raise ValueError("k must lie in [0, 4]")
    return _nu(k, prime_class(cls).tag, K)


def x_monomial(z: str) -> Poly:
    """p^-(1+2z) for z in {'mu', 'mubar'}."""
    if z == "mu":
        return Q * U * U
    if z == "mubar":
        return Q * V * V
    raise ValueError("z must be 'mu' or 'mubar'")


def shift_monomial(z: str) -> Poly:
    """p^-(1+z)."""
    if z == "mu":
        return Q * U
    if z == "mubar":
        return Q * V
    raise ValueError("z must be 'mu' or 'mubar'")


def phi_local(k: int, cls, z: str = "mu") -> Poly:
    """phi_z(p^k) for k <= 2, with X = p^-(1+2z)."""
    cls = prime_class(cls)
    X = x_monomial(z)
    if k == 0:
        return ONE
    if k == 1:
        # (l1, l2, l3) = (p, 1, 1) and (1, 1, p)
        return -LAM * (ONE + cls.eps_D * X)
    if k == 2:
        # only (1, p, 1) survives
        return local_const(cls.eps_D)
    raise ValueError("phi_local is only needed for k <= 2")


def k_local(cls, z: str = "mu") -> Poly:
    """K_p(g, 1+2z) = 1 + eps_q lambda(p^2) X + eps_qD X^2."""
    cls = prime_class(cls)
    X = x_monomial(z)
    return ONE + cls.eps_q * hecke_lambda_power(2, cls) * X + cls.eps_qD * X * X


def l_zero(cls, z: str, K: int = 24) -> RationalFunction:
    """L_p^0(0, mu, conj(mu), z)."""
    cls = prime_class(cls)
    p1 = shift_monomial(z)
    return (RationalFunction(k_local(cls, z))
            + nu_g(1, cls, K) * phi_local(1, cls, z) * p1
            + nu_g(2, cls, K) * phi_local(2, cls, z) * p1 * p1)


L_ONE_VARIANTS = ("11p", "1pp", "p1p")


def _variant_factor(variant: str, cls, K: int) -> RationalFunction:
    """nu(p, u) V_g(p, v) W_g(p, u) for (u, v, w) = variant."""
    nu1 = nu_g(1, cls, K)
    if variant == "11p":
        return nu1
    if variant == "1pp":
        return nu1 * (nu_g(3, cls, K) / (nu1 * nu_g(2, cls, K)))
    if variant == "p1p":
        return nu1 * (nu_g(2, cls, K) / (nu1 * nu1))
    raise ValueError(f"variant must be one of {L_ONE_VARIANTS}")


def l_one(cls, z: str, variant: str, K: int = 24, nu1=None) -> RationalFunction:
    """L_p^1(u, v, p; 0, mu, conj(mu), z) for (u, v) given by ``variant``.

    ``nu1`` overrides nu_g(p) (used to check the display structure).
    """
    cls = prime_class(cls)
    kp = RationalFunction(k_local(cls, z))
    phi1 = phi_local(1, cls, z)
    phi2 = phi_local(2, cls, z)
    if nu1 is not None:
        factor = RationalFunction(local_const(0)) if nu1 == 0 else _variant_factor(
            variant, cls, K) / nu_g(1, cls, K) * nu1
    else:
        factor = _variant_factor(variant, cls, K)
    if phi2.is_zero() or (isinstance(factor, RationalFunction) and factor.num.is_zero()):
        return kp
    ratio = RationalFunction(phi2) / phi1        # phi_z(p * p) / phi_z(p)
    return kp * (1 + factor * ratio * shift_monomial(z))


def l_tilde(cls, K: int = 24) -> RationalFunction:
    """The bracketed local combination at s = mu + conj(mu), (alpha, beta) = (mu, conj(mu))."""
    cls = prime_class(cls)
    T = T_MONOMIAL
    zs = ("mu", "mubar")
    nu1, nu2, nu4 = nu_g(1, cls, K), nu_g(2, cls, K), nu_g(4, cls, K)
    v_pp = nu_g(3, cls, K) / (nu1 * nu2)

    def block(variant):
        out = RationalFunction(ONE)
        for z in zs:
            out = out * (l_one(cls, z, variant, K) * phi_local(1, cls, z)
                         / RationalFunction(k_local(cls, z)))
        return out

    first = l_zero(cls, "mu", K) * l_zero(cls, "mubar", K)
    second = T * (block("11p") + nu2 * Q * block("1pp") - nu1 * nu1 * Q * block("p1p"))
    phi2_prod = phi_local(2, cls, "mu") * phi_local(2, cls, "mubar")
    if phi2_prod.is_zero():
        third = RationalFunction(local_const(0))
    else:
        third = phi2_prod * T * T * (1 + nu2 * Q - nu1 * nu1 * Q
                                     - nu1 * nu1 * nu2 * v_pp * v_pp * Q * Q
                                     + nu4 * Q * Q)
    return first + second + third


# -- standard Euler factors via Satake parameters ----------------------------

SATAKE_VARS = ("A1", "A2", "Y")


def satake_reduce(f: Poly, cls) -> Poly:
    """Rewrite a symmetric polynomial in the Satake parameters A1, A2 (and Y)
    through e1 = A1 + A2 = L and e2 = A1 A2 = eps_D."""
    cls = prime_class(cls)
    a1 = Poly.var("A1", SATAKE_VARS)
    a2 = Poly.var("A2", SATAKE_VARS)
    e1, e2 = a1 + a2, a1 * a2
    rem = f
    out = local_const(0)
    while not rem.is_zero():
        m, c = rem.lead()
        i, j, k = m
        if i < j:
            raise ValueError("polynomial is not symmetric in A1, A2")
        yk = Poly.var("Y", SATAKE_VARS, k) if k else Poly.const(1, SATAKE_VARS)
        rem = rem - c * e1 ** (i - j) * e2 ** j * yk
        out = out + c * LAM ** (i - j) * cls.eps_D ** j * Y ** k
    return out


def _euler_factor(pairs, cls) -> RationalFunction:
    a1 = Poly.var("A1", SATAKE_VARS)
    a2 = Poly.var("A2", SATAKE_VARS)
    ys = Poly.var("Y", SATAKE_VARS)
    roots = {"11": a1 * a1, "12": a1 * a2, "22": a2 * a2}
    den = Poly.const(1, SATAKE_VARS)
    for key in pairs:
        den = den * (1 - roots[key] * ys)
    return RationalFunction(ONE, [(satake_reduce(den, cls), 1)])


def rankin_local(cls, y: Poly | None = None) -> RationalFunction:
    """L_p(g x g, s) with p^-s in the slot Y (or substituted by ``y``)."""
    cls = prime_class(cls)
    if cls.eps_D == 0:
        # A1 = L, A2 = 0: only A1^2 survives
        rf = RationalFunction(ONE, [(ONE - LAM * LAM * Y, 1)])
    else:
        rf = _euler_factor(("11", "12", "12", "22"), cls)
    return rf.subs({"Y": y}) if y is not None else rf


def sym2_local(cls, y: Poly | None = None) -> RationalFunction:
    """L_p(Sym^2 g, s) with p^-s in the slot Y (or substituted by ``y``)."""
    cls = prime_class(cls)
    if cls.eps_D == 0:
        rf = RationalFunction(ONE, [(ONE - LAM * LAM * Y, 1)])
    else:
        rf = _euler_factor(("11", "12", "22"), cls)
    return rf.subs({"Y": y}) if y is not None else rf


def local_zeta(cls, y: Poly) -> RationalFunction:
    """zeta_p^(D)(2s) with p^-s = y: 1/(1 - y^2) unless p | D."""
    cls = prime_class(cls)
    if cls.eps_D == 0:
        return RationalFunction(ONE)
    return RationalFunction(ONE, [(ONE - y * y, 1)])

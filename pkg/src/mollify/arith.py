"""Exponential sums, Bessel J of integer order and the truncated Petersson operator."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import DomainError, NoConvergence

__all__ = ["kloosterman", "kloosterman_complex", "kloosterman_block", "ramanujan",
           "ramanujan_bruteforce", "divisor_count", "mobius", "euler_phi", "weil_bound",
           "weil_check", "bessel_j", "bessel_envelope", "TruncationCertificate",
           "delta_operator", "modinv"]

WEIL_SLACK = 1e-9
MAX_TERMS = 10**7


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisor_count(n: int) -> int:
    if n < 1:
        raise DomainError("divisor_count needs n >= 1")
    return math.prod(e + 1 for e in _factor(n).values())


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError("mobius needs n >= 1")
    f = _factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError("euler_phi needs n >= 1")
    out = n
    for p in _factor(n):
        out -= out // p
    return out


def modinv(x: int, c: int) -> int:
    return pow(x, -1, c)


def _check_kl(m: int, n: int, c: int) -> None:
    if c < 1:
        raise DomainError("c must be >= 1")
    if m < 0 or n < 0:
        raise DomainError("m, n must be >= 0")


def kloosterman(m: int, n: int, c: int) -> float:
    """S(m, n; c) as a real cosine sum."""
    _check_kl(m, n, c)
    return float(kernels.kloosterman(m, n, c))


def kloosterman_complex(m: int, n: int, c: int) -> complex:
    """The complex exponential sum, for cross-checking the real form."""
    _check_kl(m, n, c)
    if c == 1:
        return 1 + 0j
    total = 0j
    for x in range(1, c):
        if math.gcd(x, c) == 1:
            total += cmath.exp(2j * math.pi * ((m * x + n * modinv(x, c)) % c) / c)
    return total


def kloosterman_block(m_max: int, n_max: int, c: int):
    """S(m, n; c) for 1 <= m <= m_max, 1 <= n <= n_max as an array."""
    if c < 1 or m_max < 1 or n_max < 1:
        raise DomainError("need c, m_max, n_max >= 1")
    return kernels.kloosterman_block(m_max, n_max, c)


def ramanujan(n: int, c: int) -> int:
    """r(n; c) = sum_{d | (n, c)} d mu(c/d)."""
    if c < 1:
        raise DomainError("c must be >= 1")
    g = math.gcd(n, c)
    return sum(d * mobius(c // d) for d in range(1, g + 1) if g % d == 0)


def ramanujan_bruteforce(n: int, c: int) -> int:
    total = sum(math.cos(2 * math.pi * n * x / c) for x in range(1, c + 1)
                if math.gcd(x, c) == 1)
    return round(total)


def weil_bound(m: int, n: int, c: int) -> float:
    g = math.gcd(math.gcd(m, n), c)
    return divisor_count(c) * math.sqrt(g) * math.sqrt(c)


def weil_check(m: int, n: int, c: int) -> bool:
    _check_kl(m, n, c)
    return abs(kloosterman(m, n, c)) <= weil_bound(m, n, c) + WEIL_SLACK


# -- Bessel ------------------------------------------------------------------

def _bessel_series(k: int, x: float) -> float:
    # exact rational staging: the alternating terms are summed without
    # cancellation, then rounded once
    hx = Fraction(x) / 2
    h2 = hx * hx
    term = hx ** k / math.factorial(k)
    total = term
    m = 0
    bound = Fraction(1, 10**20)
    while True:
        m += 1
        term = -term * h2 / (m * (m + k))
        total += term
        # terms decrease monotonically once m(m+k) > h2
        if m * (m + k) > h2 and abs(term) < bound * max(abs(total), 1):
            break
    return float(total)


def _bessel_miller(k: int, x: float) -> float:
    # backward recurrence from well above max(k, x), normalised with
    # J_0 + 2 sum J_{2j} = 1
    start = int(max(k, x) + 30 + 2 * math.sqrt(40 * max(k, x)))
    start += start % 2
    j_next, j_cur = 0.0, 1e-300
    norm = 0.0
    want = 0.0
    two_over_x = 2.0 / x
    for n in range(start, 0, -1):
        j_prev = n * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if n - 1 == k:
            want = j_cur
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm += 2.0 * j_cur
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            want *= 1e-250
            norm *= 1e-250
    norm += j_cur
    return want / norm


def bessel_j(k: int, x: float) -> float:
    """J_k(x) for integer 0 <= k <= 64 and 0 <= x <= 1e6."""
    if not 0 <= k <= 64:
        raise DomainError("k must lie in [0, 64]")
    if not 0 <= x <= 1e6:
        raise DomainError("x must lie in [0, 1e6]")
    if x == 0:
        return 1.0 if k == 0 else 0.0
    if x <= max(12.0, 2.0 * k):
        return _bessel_series(k, x)
    return _bessel_miller(k, x)


def bessel_envelope(k: int, x: float) -> float:
    """|J_k(x)| <= (x/2)^k / k! for x >= 0."""
    return (x / 2) ** k / math.factorial(k)


# -- Petersson operator --------------------------------------------------------

@dataclass(frozen=True)
class TruncationCertificate:
    value: float
    truncation_point: int
    certified_tail: float
    terms: int = 0

    def contains(self, x: float) -> bool:
        return abs(x - self.value) <= self.certified_tail


def _tail_bound(J: int, N: int, m: int, n: int, k: int) -> float:
    # for c = jN, j > J: |S| <= tau(c) sqrt(g) sqrt(c) <= 2 sqrt(g) c, so
    # |term| <= 2 pi * 2 sqrt(g) (2 pi sqrt(mn))^(k-1) / (k-1)! (jN)^-(k-1);
    # sum_{j > J} j^-(k-1) <= J^-(k-2) / (k-2)
    g = math.gcd(m, n)
    lead = 4 * math.pi * math.sqrt(g) * (2 * math.pi * math.sqrt(m * n)) ** (k - 1)
    lead /= math.factorial(k - 1)
    return lead * float(N) ** -(k - 1) * float(J) ** -(k - 2) / (k - 2)


def delta_operator(N: int, m: int, n: int, k: int, tol: float) -> TruncationCertificate:
    """Delta_N(m, n) with a rigorous bound on the discarded c-tail."""
    if N < 1 or m < 1 or n < 1:
        raise DomainError("N, m, n must be >= 1")
    if k < 4 or k % 2:
        raise DomainError("k must be an even integer >= 4")
    if not tol > 0:
        raise DomainError("tol must be positive")
    sign = -1 if (k // 2) % 2 else 1          # i^-k for even k
    y_num = 4 * math.pi * math.sqrt(m * n)
    terms = []
    j = 0
    while True:
        j += 1
        if j > MAX_TERMS:
            raise NoConvergence(f"tail above {tol} after {MAX_TERMS} terms")
        c = j * N
        terms.append(kloosterman(m, n, c) / c * bessel_j(k - 1, y_num / c))
        # envelope used only where y <= k - 1
        if y_num / c <= k - 1 and _tail_bound(j, N, m, n, k) < tol:
            break
    value = (1.0 if m == n else 0.0) + 2 * math.pi * sign * math.fsum(terms)
    return TruncationCertificate(value=value, truncation_point=j * N,
                                 certified_tail=_tail_bound(j, N, m, n, k),
                                 terms=len(terms))

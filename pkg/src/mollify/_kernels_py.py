"""Pure-Python reference implementation of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; selected automatically when
the compiled module is unavailable (see ``mollify.kernels``).

The V kernel evaluates V(u,v) - 1 in closed form.  With Q(x) the polynomial
|P'(x) + w P''(x)|^2, w = 1/(2(u+iv)Delta), the weighted integral of Q over
[0, Upsilon] reduces to exponential moments M_n(b) = int_0^1 e^(-b s) s^n ds
after recentring at the endpoint where the weight is largest.  ``fwd`` holds
the coefficients of Upsilon*Q_i(Upsilon*s) and ``bwd`` those of
Upsilon*Q_i(Upsilon*(1-s)), for Q_1 = P'^2, Q_2 = P'P'', Q_3 = P''^2.
"""

import math

import numpy as np

_SMALL_Z = 1.0
_EXTRA = 40


def moments(b, nmax):
    """[M_0(b), ..., M_nmax(b)] for b >= 0."""
    out = [0.0] * (nmax + 1)
    if b == 0.0:
        for n in range(nmax + 1):
            out[n] = 1.0 / (n + 1)
        return out
    eb = math.exp(-b)
    if b > nmax + 1:
        m = -math.expm1(-b) / b
        out[0] = m
        for n in range(1, nmax + 1):
            m = (n * m - eb) / b
            out[n] = m
        return out
    m = 0.0
    for n in range(nmax + _EXTRA, 0, -1):
        m = (b * m + eb) / n
        if n - 1 <= nmax:
            out[n - 1] = m
    return out


def _diff_series_scaled(u, v):
    # (sinh(u)/u - sin(v)/v) / (u^2 + v^2) = sum_k h_k / (2k+1)!, where
    # h_k = (a^k - b^k) / (a - b) for a = u^2, b = -v^2
    a, b = u * u, -v * v
    h, bk = 1.0, 1.0
    total = 1.0 / 6.0
    fact = 6.0
    for k in range(2, 16):
        bk *= b
        h = a * h + bk
        fact *= (2 * k) * (2 * k + 1)
        total += h / fact
    return total


def v_excess(u, v, delta, upsilon, fwd, bwd):
    """(mantissa, log_scale) with V(u,v) - 1 = mantissa * exp(log_scale)."""
    r2 = u * u + v * v
    if u == 0.0 and v == 0.0:
        raise ZeroDivisionError("V is singular at (0, 0)")
    # prefactor e^(-u) (sinh u/u - sin v/v); near the origin it carries the
    # factor r^2 so that 1/r^2 never appears
    if r2 < _SMALL_Z:
        pre = math.exp(-u) * _diff_series_scaled(u, v)
        pre_log = 0.0
        c1, c2, c3 = r2, u / delta, 1.0 / (4.0 * delta * delta)
    else:
        sv = math.sin(v) / v if v != 0.0 else 1.0
        if u > 0.0:
            pre = -math.expm1(-2.0 * u) / (2.0 * u) - math.exp(-u) * sv
            pre_log = 0.0
        elif u == 0.0:
            pre = 1.0 - sv
            pre_log = 0.0
        else:
            pre = -math.expm1(2.0 * u) / (-2.0 * u) - math.exp(u) * sv
            pre_log = -2.0 * u
        # |P' + w P''|^2 = P'^2 + 2 Re(w) P'P'' + |w|^2 P''^2, w = 1/(2(u+iv)Delta)
        c1, c2, c3 = 1.0, u / (delta * r2), 1.0 / (4.0 * delta * delta * r2)
    if u >= 0.0:
        coef = bwd
        b = 2.0 * u * delta * upsilon
        int_log = -2.0 * u * delta * (1.0 - upsilon)
    else:
        coef = fwd
        b = -2.0 * u * delta * upsilon
        int_log = -2.0 * u * delta
    q1, q2, q3 = coef[0], coef[1], coef[2]
    nmax = len(q1) - 1
    mom = moments(b, nmax)
    s = 0.0
    for n in range(nmax + 1):
        s += (c1 * q1[n] + c2 * q2[n] + c3 * q3[n]) * mom[n]
    mant = pre * s / delta
    if mant < 0.0:
        mant = 0.0
    return mant, pre_log + int_log


def _log1p_scaled(mant, logscale):
    # log(1 + mant*e^logscale) without overflow
    if mant <= 0.0:
        return 0.0
    lw = logscale + math.log(mant)
    if lw > 0.0:
        return lw + math.log1p(math.exp(-lw))
    return math.log1p(math.exp(lw))


def log_v(u, v, delta, upsilon, fwd, bwd):
    mant, ls = v_excess(u, v, delta, upsilon, fwd, bwd)
    return _log1p_scaled(mant, ls)


def log_v_many(us, vs, delta, upsilon, fwd, bwd):
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    out = np.empty(us.shape[0])
    for i in range(us.shape[0]):
        out[i] = log_v(us[i], vs[i], delta, upsilon, fwd, bwd)
    return out


def j1_integrand_many(ts, c_tilde, b_tilde, delta, upsilon, fwd, bwd):
    """cos(pi t / 2b) * log V(-c, t) on an array of t."""
    ts = np.asarray(ts, dtype=float)
    out = np.empty(ts.shape[0])
    k = math.pi / (2.0 * b_tilde)
    for i in range(ts.shape[0]):
        t = ts[i]
        out[i] = math.cos(k * t) * log_v(-c_tilde, t, delta, upsilon, fwd, bwd)
    return out


def j2_integrand_many(xs, c_tilde, b_tilde, delta, upsilon, fwd, bwd):
    """sinh(pi x / 2b) * log V(x - c, b) on an array of x, overflow-safe."""
    xs = np.asarray(xs, dtype=float)
    out = np.empty(xs.shape[0])
    k = math.pi / (2.0 * b_tilde)
    for i in range(xs.shape[0]):
        x = xs[i]
        mant, ls = v_excess(x - c_tilde, b_tilde, delta, upsilon, fwd, bwd)
        if mant <= 0.0:
            out[i] = 0.0
            continue
        lw = ls + math.log(mant)
        if lw < -30.0:
            # log1p(w) = w (1 - w/2 + ...); fold sinh into the exponent
            kx = k * x
            w = math.exp(lw)
            out[i] = 0.5 * (math.exp(kx + lw) - math.exp(-kx + lw)) * (1.0 - 0.5 * w)
        else:
            out[i] = math.sinh(k * x) * _log1p_scaled(mant, ls)
    return out


def kloosterman(m, n, c):
    """S(m,n;c) as a real cosine sum."""
    if c == 1:
        return 1.0
    table = [math.cos(2.0 * math.pi * r / c) for r in range(c)]
    total = 0.0
    for x in range(1, c):
        if math.gcd(x, c) != 1:
            continue
        xb = pow(x, -1, c)
        total += table[(m * x + n * xb) % c]
    return total


def kloosterman_block(m_max, n_max, c):
    """Array S[m-1, n-1] = S(m,n;c) for 1 <= m <= m_max, 1 <= n <= n_max."""
    if c == 1:
        return np.ones((m_max, n_max))
    units = np.array([x for x in range(1, c) if math.gcd(x, c) == 1], dtype=np.int64)
    invs = np.array([pow(int(x), -1, c) for x in units], dtype=np.int64)
    table = np.cos(2.0 * np.pi * np.arange(c) / c)
    ms = np.arange(1, m_max + 1, dtype=np.int64)[:, None, None]
    ns = np.arange(1, n_max + 1, dtype=np.int64)[None, :, None]
    idx = (ms * units[None, None, :] + ns * invs[None, None, :]) % c
    return table[idx].sum(axis=2)

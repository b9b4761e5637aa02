# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, expm1, log, log1p, sin, cos, sinh, M_PI

cnp.import_array()

cdef enum:
    MAXN = 64
    EXTRA = 40


cdef void _moments(double b, int nmax, double* out) noexcept nogil:
    cdef int n
    cdef double m, eb
    if b == 0.0:
        for n in range(nmax + 1):
            out[n] = 1.0 / (n + 1)
        return
    eb = exp(-b)
    if b > nmax + 1:
        m = -expm1(-b) / b
        out[0] = m
        for n in range(1, nmax + 1):
            m = (n * m - eb) / b
            out[n] = m
        return
    m = 0.0
    for n in range(nmax + EXTRA, 0, -1):
        m = (b * m + eb) / n
        if n - 1 <= nmax:
            out[n - 1] = m


cdef double _diff_series_scaled(double u, double v) noexcept nogil:
    cdef double a = u * u, b = -v * v
    cdef double h = 1.0, bk = 1.0, total = 1.0 / 6.0, fact = 6.0
    cdef int k
    for k in range(2, 16):
        bk *= b
        h = a * h + bk
        fact *= (2 * k) * (2 * k + 1)
        total += h / fact
    return total


cdef int _v_excess(double u, double v, double delta, double upsilon,
                   const double[:, ::1] fwd, const double[:, ::1] bwd,
                   double* mant_out, double* log_out) noexcept nogil:
    cdef double r2 = u * u + v * v
    cdef double pre, pre_log, sv, c1, c2, c3, b, int_log, s, mant
    cdef double mom[MAXN + 1]
    cdef int nmax, n
    cdef const double[:, ::1] coef
    if u == 0.0 and v == 0.0:
        return -1
    if r2 < 1.0:
        pre = exp(-u) * _diff_series_scaled(u, v)
        pre_log = 0.0
        c1 = r2
        c2 = u / delta
        c3 = 1.0 / (4.0 * delta * delta)
    else:
        sv = sin(v) / v if v != 0.0 else 1.0
        if u > 0.0:
            pre = -expm1(-2.0 * u) / (2.0 * u) - exp(-u) * sv
            pre_log = 0.0
        elif u == 0.0:
            pre = 1.0 - sv
            pre_log = 0.0
        else:
            pre = -expm1(2.0 * u) / (-2.0 * u) - exp(u) * sv
            pre_log = -2.0 * u
        c1 = 1.0
        c2 = u / (delta * r2)
        c3 = 1.0 / (4.0 * delta * delta * r2)
    if u >= 0.0:
        coef = bwd
        b = 2.0 * u * delta * upsilon
        int_log = -2.0 * u * delta * (1.0 - upsilon)
    else:
        coef = fwd
        b = -2.0 * u * delta * upsilon
        int_log = -2.0 * u * delta
    nmax = coef.shape[1] - 1
    _moments(b, nmax, mom)
    s = 0.0
    for n in range(nmax + 1):
        s += (c1 * coef[0, n] + c2 * coef[1, n] + c3 * coef[2, n]) * mom[n]
    mant = pre * s / delta
    if mant < 0.0:
        mant = 0.0
    mant_out[0] = mant
    log_out[0] = pre_log + int_log
    return 0


cdef inline double _log1p_scaled(double mant, double logscale) noexcept nogil:
    cdef double lw
    if mant <= 0.0:
        return 0.0
    lw = logscale + log(mant)
    if lw > 0.0:
        return lw + log1p(exp(-lw))
    return log1p(exp(lw))


cdef void _check(const double[:, ::1] fwd, const double[:, ::1] bwd):
    if fwd.shape[0] != 3 or bwd.shape[0] != 3 or fwd.shape[1] != bwd.shape[1]:
        raise ValueError("coefficient arrays must have shape (3, n)")
    if fwd.shape[1] > MAXN + 1:
        raise ValueError("polynomial degree too large for the compiled kernel")


def v_excess(double u, double v, double delta, double upsilon, fwd, bwd):
    cdef double[:, ::1] f = np.ascontiguousarray(fwd, dtype=np.float64)
    cdef double[:, ::1] g = np.ascontiguousarray(bwd, dtype=np.float64)
    cdef double mant, ls
    _check(f, g)
    if _v_excess(u, v, delta, upsilon, f, g, &mant, &ls) != 0:
        raise ZeroDivisionError("V is singular at (0, 0)")
    return mant, ls


def log_v(double u, double v, double delta, double upsilon, fwd, bwd):
    mant, ls = v_excess(u, v, delta, upsilon, fwd, bwd)
    return _log1p_scaled(mant, ls)


def log_v_many(us, vs, double delta, double upsilon, fwd, bwd):
    cdef double[::1] uu = np.ascontiguousarray(us, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(vs, dtype=np.float64)
    cdef double[:, ::1] f = np.ascontiguousarray(fwd, dtype=np.float64)
    cdef double[:, ::1] g = np.ascontiguousarray(bwd, dtype=np.float64)
    cdef Py_ssize_t i, n = uu.shape[0]
    cdef double mant, ls
    cdef int bad = 0
    _check(f, g)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            if _v_excess(uu[i], vv[i], delta, upsilon, f, g, &mant, &ls) != 0:
                bad = 1
                break
            o[i] = _log1p_scaled(mant, ls)
    if bad:
        raise ZeroDivisionError("V is singular at (0, 0)")
    return out


def j1_integrand_many(ts, double c_tilde, double b_tilde, double delta,
                      double upsilon, fwd, bwd):
    cdef double[::1] tt = np.ascontiguousarray(ts, dtype=np.float64)
    cdef double[:, ::1] f = np.ascontiguousarray(fwd, dtype=np.float64)
    cdef double[:, ::1] g = np.ascontiguousarray(bwd, dtype=np.float64)
    cdef Py_ssize_t i, n = tt.shape[0]
    cdef double mant, ls, k = M_PI / (2.0 * b_tilde)
    cdef int bad = 0
    _check(f, g)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            if _v_excess(-c_tilde, tt[i], delta, upsilon, f, g, &mant, &ls) != 0:
                bad = 1
                break
            o[i] = cos(k * tt[i]) * _log1p_scaled(mant, ls)
    if bad:
        raise ZeroDivisionError("V is singular at (0, 0)")
    return out


def j2_integrand_many(xs, double c_tilde, double b_tilde, double delta,
                      double upsilon, fwd, bwd):
    cdef double[::1] xx = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:, ::1] f = np.ascontiguousarray(fwd, dtype=np.float64)
    cdef double[:, ::1] g = np.ascontiguousarray(bwd, dtype=np.float64)
    cdef Py_ssize_t i, n = xx.shape[0]
    cdef double mant, ls, lw, kx, w, k = M_PI / (2.0 * b_tilde)
    cdef int bad = 0
    _check(f, g)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            if _v_excess(xx[i] - c_tilde, b_tilde, delta, upsilon, f, g,
                         &mant, &ls) != 0:
                bad = 1
                break
            if mant <= 0.0:
                o[i] = 0.0
                continue
            lw = ls + log(mant)
            if lw < -30.0:
                kx = k * xx[i]
                w = exp(lw)
                o[i] = 0.5 * (exp(kx + lw) - exp(-kx + lw)) * (1.0 - 0.5 * w)
            else:
                o[i] = sinh(k * xx[i]) * _log1p_scaled(mant, ls)
    if bad:
        raise ZeroDivisionError("V is singular at (0, 0)")
    return out


cdef long long _inverse(long long x, long long c) noexcept nogil:
    # extended Euclid; caller guarantees gcd(x, c) = 1
    cdef long long r0 = c, r1 = x % c, s0 = 0, s1 = 1, q, t
    while r1 != 0:
        q = r0 // r1
        t = r0 - q * r1
        r0 = r1
        r1 = t
        t = s0 - q * s1
        s0 = s1
        s1 = t
    s0 %= c
    if s0 < 0:
        s0 += c
    return s0


cdef long long _gcd(long long a, long long b) noexcept nogil:
    cdef long long t
    while b != 0:
        t = a % b
        a = b
        b = t
    return a


def kloosterman(long long m, long long n, long long c):
    cdef long long x, xb, r
    cdef double total = 0.0
    if c < 1:
        raise ValueError("c must be >= 1")
    if c == 1:
        return 1.0
    m %= c
    n %= c
    if m < 0:
        m += c
    if n < 0:
        n += c
    table = np.cos(2.0 * np.pi * np.arange(c) / c)
    cdef double[::1] tab = table
    with nogil:
        for x in range(1, c):
            if _gcd(x, c) != 1:
                continue
            xb = _inverse(x, c)
            r = (m * x + n * xb) % c
            total += tab[r]
    return total


def kloosterman_block(long long m_max, long long n_max, long long c):
    cdef long long x, xb, mi, ni, count = 0, j
    cdef double acc
    if c == 1:
        return np.ones((m_max, n_max))
    table = np.cos(2.0 * np.pi * np.arange(c) / c)
    cdef double[::1] tab = table
    units_arr = np.empty(c, dtype=np.int64)
    invs_arr = np.empty(c, dtype=np.int64)
    cdef long long[::1] units = units_arr
    cdef long long[::1] invs = invs_arr
    for x in range(1, c):
        if _gcd(x, c) == 1:
            units[count] = x
            invs[count] = _inverse(x, c)
            count += 1
    out = np.empty((m_max, n_max))
    cdef double[:, ::1] o = out
    with nogil:
        for mi in range(1, m_max + 1):
            for ni in range(1, n_max + 1):
                acc = 0.0
                for j in range(count):
                    acc += tab[(mi * units[j] + ni * invs[j]) % c]
                o[mi - 1, ni - 1] = acc
    return out

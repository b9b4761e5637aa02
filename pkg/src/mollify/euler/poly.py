"""Sparse multivariate polynomials and rational functions over Q.

Polynomials are dicts from exponent tuples to Fractions; all arithmetic is
exact.  Rational functions keep their denominator as a product of
normalised factors, which lets common factors cancel by exact division
without any multivariate gcd.  Equality is always decided by
cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

__all__ = ["Poly", "RationalFunction", "LOCAL_VARS", "local_var", "local_const",
           "as_rational_function"]

LOCAL_VARS = ("Q", "U", "V", "L", "Y")


def _coerce_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact scalar expected, got {type(c).__name__}")


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("terms", "names", "_hash")

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None,
                 names: tuple = LOCAL_VARS):
        clean = {}
        nv = len(names)
        for mon, c in (terms or {}).items():
            if c:
                if len(mon) != nv:
                    raise ValueError("exponent vector length does not match names")
                clean[tuple(mon)] = _coerce_scalar(c)
        self.terms = clean
        self.names = tuple(names)
        self._hash = None

    # -- constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c, names: tuple = LOCAL_VARS) -> "Poly":
        return cls({(0,) * len(names): _coerce_scalar(c)}, names)

    @classmethod
    def var(cls, name: str, names: tuple = LOCAL_VARS, power: int = 1) -> "Poly":
        mon = [0] * len(names)
        mon[names.index(name)] = power
        return cls({tuple(mon): Fraction(1)}, names)

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.names != self.names:
                raise ValueError("polynomials live in different rings")
            return other
        return Poly.const(other, self.names)

    # -- predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.names), Fraction(0))

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Poly):
            c = _coerce_scalar(other)
            return Poly({m: c * v for m, v in self.terms.items()}, self.names)
        other = self._lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out, self.names)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _coerce_scalar(other))
        return as_rational_function(self) / other

    def __rtruediv__(self, other):
        return as_rational_function(self._lift(other)) / self

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return other == self
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.names)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.names, frozenset(self.terms.items())))
        return self._hash

    # -- structure ------------------------------------------------------------
    def lead(self) -> tuple[tuple, Fraction]:
        """Leading term in lex order (names order)."""
        m = max(self.terms)
        return m, self.terms[m]

    def degree(self, name: str) -> int:
        i = self.names.index(name)
        return max((m[i] for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def variables(self) -> set:
        return {self.names[i] for m in self.terms for i, e in enumerate(m) if e}

    def coefficient(self, name: str, k: int) -> "Poly":
        """Coefficient of name^k, as a polynomial in the remaining variables."""
        i = self.names.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i] == k:
                mm = list(m)
                mm[i] = 0
                out[tuple(mm)] = c
        return Poly(out, self.names)

    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        """Substitute polynomials (or scalars) for variables."""
        idx = {self.names.index(k): (v if isinstance(v, Poly) else Poly.const(v, self.names))
               for k, v in mapping.items()}
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = idx[i] ** e
            return powers[key]

        result = Poly({}, self.names)
        for m, c in self.terms.items():
            rest = tuple(0 if i in idx else e for i, e in enumerate(m))
            term = Poly({rest: c}, self.names)
            for i, e in enumerate(m):
                if i in idx and e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [_coerce_scalar(point.get(n, 0)) if n in point else None for n in self.names]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    if v is None:
                        raise KeyError("missing value for a variable in evaluate")
                    t *= v ** e
            total += t
        return total

    def exact_div(self, g: "Poly") -> "Poly | None":
        """self / g if g divides self exactly, else None."""
        g = self._lift(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        gm, gc = g.lead()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            m = max(rem)
            c = rem[m]
            if any(a < b for a, b in zip(m, gm)):
                return None
            qm = tuple(a - b for a, b in zip(m, gm))
            qc = c / gc
            quot[qm] = qc
            for m2, c2 in g.terms.items():
                mm = tuple(a + b for a, b in zip(qm, m2))
                v = rem.get(mm, 0) - qc * c2
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return Poly(quot, self.names)

    def normalized(self) -> tuple[Fraction, "Poly"]:
        """(scale, p) with self = scale * p; p has constant term 1 if it has
        one, otherwise leading coefficient 1."""
        if self.is_zero():
            raise ZeroDivisionError("cannot normalise the zero polynomial")
        c0 = self.constant_term()
        scale = c0 if c0 else self.lead()[1]
        return scale, self * (1 / scale)

    # -- display --------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda mm: (sum(mm), tuple(-e for e in mm))):
            c = self.terms[m]
            mon = "*".join(f"{n}^{e}" if e > 1 else n
                           for n, e in zip(self.names, m) if e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mon:
                body = str(a)
            elif a == 1:
                body = mon
            else:
                body = f"{a}*{mon}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self})"


def local_var(name: str) -> Poly:
    return Poly.var(name, LOCAL_VARS)


def local_const(c) -> Poly:
    return Poly.const(c, LOCAL_VARS)


class RationalFunction:
    """num / prod(atom^e); atoms are normalised non-constant polynomials."""

    __slots__ = ("num", "factors", "__dict__")

    def __init__(self, num: Poly, den: Poly | Iterable | None = None):
        names = num.names
        factors: dict = {}
        if den is None:
            pass
        elif isinstance(den, Poly):
            num = self._absorb(num, factors, den, 1)
        else:
            for atom, e in den:
                num = self._absorb(num, factors, atom, e)
        self.num = num
        self.factors = factors
        self._cancel()
        if names != self.num.names:
            raise ValueError("ring mismatch")

    @staticmethod
    def _absorb(num: Poly, factors: dict, atom: Poly, e: int) -> Poly:
        if e == 0:
            return num
        if atom.is_zero():
            raise ZeroDivisionError("zero denominator")
        scale, norm = atom.normalized()
        num = num * (Fraction(1) / scale ** e)
        if norm.is_constant():
            return num
        factors[norm] = factors.get(norm, 0) + e
        return num

    def _cancel(self):
        if self.num.is_zero():
            self.factors = {}
            return
        for atom in sorted(self.factors, key=str):
            while self.factors.get(atom, 0) > 0:
                q = self.num.exact_div(atom)
                if q is None:
                    break
                self.num = q
                self.factors[atom] -= 1
            if self.factors.get(atom) == 0:
                del self.factors[atom]

    @property
    def names(self) -> tuple:
        return self.num.names

    @cached_property
    def den(self) -> Poly:
        d = Poly.const(1, self.names)
        for atom in sorted(self.factors, key=str):
            d = d * atom ** self.factors[atom]
        return d

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        return RationalFunction(Poly.const(other, self.names))

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        common = dict(self.factors)
        for a, e in other.factors.items():
            common[a] = max(common.get(a, 0), e)

        def lifted_num(rf):
            n = rf.num
            for a, e in common.items():
                extra = e - rf.factors.get(a, 0)
                if extra:
                    n = n * a ** extra
            return n

        return RationalFunction(lifted_num(self) + lifted_num(other), list(common.items()))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, list(self.factors.items()))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        factors = dict(self.factors)
        for a, e in other.factors.items():
            factors[a] = factors.get(a, 0) + e
        # cross-cancel before multiplying out
        n1, n2 = self.num, other.num
        f1 = dict(other.factors)
        f2 = dict(self.factors)
        for a in list(f1):
            while f1[a] > 0:
                q = n1.exact_div(a)
                if q is None:
                    break
                n1, f1[a] = q, f1[a] - 1
        for a in list(f2):
            while f2[a] > 0:
                q = n2.exact_div(a)
                if q is None:
                    break
                n2, f2[a] = q, f2[a] - 1
        merged = {}
        for a in set(f1) | set(f2):
            e = f1.get(a, 0) + f2.get(a, 0)
            if e:
                merged[a] = e
        return RationalFunction(n1 * n2, list(merged.items()))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        return RationalFunction(self.den, [(self.num, 1)])

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        return RationalFunction(self.num ** k, [(a, e * k) for a, e in self.factors.items()])

    # -- comparison -----------------------------------------------------------
    def cross_difference(self, other) -> Poly:
        """num1*den2 - num2*den1; zero iff the functions are equal."""
        other = self._lift(other)
        return self.num * other.den - other.num * self.den

    def __eq__(self, other):
        if not isinstance(other, (RationalFunction, Poly, int, Fraction)):
            return NotImplemented
        return self.cross_difference(other).is_zero()

    __hash__ = None

    def is_polynomial(self) -> bool:
        return not self.factors

    # -- evaluation -----------------------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "RationalFunction":
        num = self.num.subs(mapping)
        den = [(a.subs(mapping), e) for a, e in self.factors.items()]
        return RationalFunction(num, den)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(point) / d

    def series(self, name: str, order: int) -> list[Poly]:
        """Power-series coefficients in ``name`` up to name^(order-1).

        Requires the denominator to have a non-zero constant coefficient in
        ``name`` that is a scalar (so the inverse stays polynomial).
        """
        den = self.den
        d = [den.coefficient(name, k) for k in range(den.degree(name) + 1)]
        if not d[0].is_constant() or d[0].is_zero():
            raise ValueError("denominator is not a unit at the expansion point")
        inv0 = Fraction(1) / d[0].constant_term()
        n = [self.num.coefficient(name, k) for k in range(order)]
        out: list[Poly] = []
        for k in range(order):
            acc = n[k]
            for j in range(1, min(k, len(d) - 1) + 1):
                acc = acc - d[j] * out[k - j]
            out.append(acc * inv0)
        return out

    def total_degrees(self) -> dict:
        return {"num": self.num.total_degree(), "den": self.den.total_degree()}

    def __str__(self):
        if not self.factors:
            return str(self.num)
        parts = []
        for a in sorted(self.factors, key=str):
            e = self.factors[a]
            parts.append(f"({a})" + (f"^{e}" if e > 1 else ""))
        return f"({self.num}) / ({' * '.join(parts)})"

    def __repr__(self):
        return f"RationalFunction({self})"


def as_rational_function(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction(local_const(x))

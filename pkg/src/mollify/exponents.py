"""Exact rational exponent formulas and the small optimizations built on them.

Every quantity is recomputed from its defining expression in
``fractions.Fraction``; published decimal values only appear in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DomainError, InfeasibleCrossing

ExactRational = Fraction

__all__ = [
    "ExactRational",
    "AffineBound",
    "as_rational",
    "delta_max",
    "omega",
    "kmv_effective_delta",
    "kmv_branches",
    "prop_d_effective_delta",
    "prop_d_branches",
    "alpha_prop_d",
    "alpha_thm_b",
    "x_amp",
    "amplifier_lines",
    "amplifier_optimum",
    "spectral_deltas",
]

HALF = Fraction(1, 2)

# error-term exponents (a, b) of the two first-step estimates
KMV_CONSTANTS = ((Fraction(3, 4), Fraction(1, 12)), (Fraction(17, 8), Fraction(1, 4)))


def as_rational(value) -> Fraction:
    """Accept ints, Fractions and 'p/q' strings; reject floats."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"expected a 'p/q' literal, got {value!r}")
        return Fraction(text)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _theta(theta, allow_half=True) -> Fraction:
    th = as_rational(theta)
    if th < 0 or th > HALF or (th == HALF and not allow_half):
        raise DomainError(f"theta={th} outside [0, 1/2)")
    return th


@dataclass(frozen=True)
class AffineBound:
    """The exponent intercept + slope*x of q, as a function of x (L = q^(2x))."""

    intercept: Fraction
    slope: Fraction

    def __call__(self, x) -> Fraction:
        return self.intercept + self.slope * x

    def crossing(self, other: "AffineBound") -> Fraction | None:
        if self.slope == other.slope:
            return None
        return (other.intercept - self.intercept) / (self.slope - other.slope)


def delta_max(theta) -> Fraction:
    """(1-2θ)/(4(5+2θ)); θ = 1/2 is admitted as the boundary value 0."""
    th = _theta(theta)
    return (1 - 2 * th) / (4 * (5 + 2 * th))


def omega(theta) -> Fraction:
    th = _theta(theta)
    return (1 - 2 * th) / (4 * (9 + 4 * th))


def kmv_branches() -> tuple[Fraction, Fraction]:
    return tuple(b / (4 * (a + HALF)) for a, b in KMV_CONSTANTS)


def kmv_effective_delta() -> Fraction:
    return min(kmv_branches())


def prop_d_branches(theta, alpha) -> tuple[Fraction, Fraction]:
    th = _theta(theta, allow_half=False)
    al = as_rational(alpha)
    if not (HALF + th < al < 1):
        raise DomainError(f"alpha={al} outside (1/2+theta, 1)")
    first = (1 - 2 * th) / (4 * (5 + 2 * th))
    second = (2 * al - 1 - 2 * th) / (2 * (11 + 2 * th - 4 * al))
    return first, second


def prop_d_effective_delta(theta, alpha) -> Fraction:
    return min(prop_d_branches(theta, alpha))


def alpha_prop_d(theta) -> Fraction:
    th = _theta(theta, allow_half=False)
    return Fraction(7, 8) + th / 6 + th * th / 6


def alpha_thm_b(theta) -> Fraction:
    th = _theta(theta)
    return Fraction(19, 22) + 2 * th / 11 + 2 * th * th / 11


def x_amp(theta) -> Fraction:
    th = _theta(theta)
    return (1 - 2 * th) / (2 * (9 + 4 * th))


def amplifier_lines(theta) -> tuple[AffineBound, AffineBound, AffineBound]:
    """Exponents of q in the amplified bound for |L|^2, with L = q^(2x)."""
    th = _theta(theta)
    al = alpha_thm_b(th)
    return (
        AffineBound(Fraction(1), Fraction(-1)),
        AffineBound(HALF + th, 8 + 4 * th),
        AffineBound(Fraction(3, 2) + th - al, 9 + 2 * th - 4 * al),
    )


def amplifier_optimum(theta) -> tuple[Fraction, Fraction]:
    """Minimise max of the three exponent lines over x in [0, 1/4).

    The decreasing line 1 - x is balanced against the increasing ones; the
    min-max sits at the first crossing with an increasing line.
    """
    th = _theta(theta)
    lines = amplifier_lines(th)
    decreasing = [ln for ln in lines if ln.slope < 0]
    increasing = [ln for ln in lines if ln.slope > 0]
    if len(decreasing) != 1 or not increasing:
        raise InfeasibleCrossing("unexpected slope signs")
    crossings = []
    for ln in increasing:
        x = decreasing[0].crossing(ln)
        if x is not None and 0 <= x < Fraction(1, 4):
            crossings.append(x)
    if not crossings:
        raise InfeasibleCrossing(f"no admissible crossing for theta={th}")
    x_star = min(crossings)
    exponent = max(ln(x_star) for ln in lines)
    # the min-max must beat every other pairwise crossing in the range
    for l1, l2 in combinations(lines, 2):
        x = l1.crossing(l2)
        if x is not None and 0 <= x < Fraction(1, 4):
            if max(ln(x) for ln in lines) < exponent:
                raise InfeasibleCrossing("min-max not at the first crossing")
    if exponent != 1 - 2 * omega(th):
        raise InfeasibleCrossing(
            f"exponent {exponent} differs from 1 - 2*omega = {1 - 2 * omega(th)}")
    return x_star, exponent


def spectral_deltas(theta) -> tuple[Fraction, Fraction]:
    th = _theta(theta)
    return (1 - 2 * th) / (8 * (4 + th)), (1 - 2 * th) / (4 * (7 + 2 * th))

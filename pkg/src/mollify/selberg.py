"""Zero-counting identity on a rectangle, checked on polynomials with known zeros."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryZero, BranchFailure, DomainError
from .quadrature import QuadratureSpec, integrate_finite

__all__ = ["ZeroBox", "SyntheticFunction", "kernel", "selberg_lhs", "selberg_rhs",
           "selberg_rhs_parts", "zero_config_lower_bound", "random_case",
           "BOUNDARY_EPS"]

BOUNDARY_EPS = 1e-9
DEFAULT_SPEC = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-12, max_subdivisions=4000)


@dataclass(frozen=True)
class ZeroBox:
    """Rectangle with vertices w0 +- ih, w1 +- ih; w marks the zero-free half plane."""

    w0: float
    w1: float
    h: float
    w: float

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("box height must be positive")
        if not self.w0 < self.w < self.w1:
            raise DomainError("need w0 < w < w1")

    def contains(self, z: complex) -> bool:
        return self.w0 < z.real < self.w1 and abs(z.imag) < self.h

    def boundary_distance(self, z: complex) -> float:
        """Distance from z to the boundary of the rectangle."""
        dx = max(self.w0 - z.real, 0.0, z.real - self.w1)
        dy = max(-self.h - z.imag, 0.0, z.imag - self.h)
        if dx or dy:
            return math.hypot(dx, dy)
        return min(z.real - self.w0, self.w1 - z.real, self.h - z.imag, z.imag + self.h)


@dataclass(frozen=True)
class SyntheticFunction:
    """psi(s) = prod (s - rho_j)^(m_j)."""

    zeros: tuple = ()

    def __post_init__(self):
        clean = []
        for item in self.zeros:
            rho, m = item if isinstance(item, tuple) else (item, 1)
            if int(m) != m or m < 1:
                raise DomainError("multiplicities must be positive integers")
            clean.append((complex(rho), int(m)))
        object.__setattr__(self, "zeros", tuple(clean))

    def __mul__(self, other: "SyntheticFunction") -> "SyntheticFunction":
        return SyntheticFunction(self.zeros + other.zeros)

    def log_abs(self, s):
        s = np.asarray(s, dtype=complex)
        out = np.zeros(s.shape)
        for rho, m in self.zeros:
            out += m * np.log(np.abs(s - rho))
        return out

    def log(self, s):
        """Sum of per-factor principal logarithms."""
        s = np.asarray(s, dtype=complex)
        out = np.zeros(s.shape, dtype=complex)
        for rho, m in self.zeros:
            out += m * np.log(s - rho)
        return out

    def __call__(self, s):
        return np.prod([(np.asarray(s, dtype=complex) - rho) ** m for rho, m in self.zeros],
                       axis=0) if self.zeros else np.ones_like(np.asarray(s, dtype=complex))


def kernel(s, box: ZeroBox):
    """k(s) = cos(pi (s - w0) / (2 i h))."""
    return np.cos(np.pi * (np.asarray(s, dtype=complex) - box.w0) / (2j * box.h))


def _check_boundary(f: SyntheticFunction, box: ZeroBox) -> None:
    for rho, _ in f.zeros:
        if box.boundary_distance(rho) < BOUNDARY_EPS:
            raise BoundaryZero(f"zero {rho} lies on the box boundary")


def selberg_lhs(f: SyntheticFunction, box: ZeroBox) -> float:
    _check_boundary(f, box)
    total = []
    for rho, m in f.zeros:
        if box.contains(rho):
            total.append(m * math.cos(math.pi * rho.imag / (2 * box.h))
                         * math.sinh(math.pi * (rho.real - box.w0) / (2 * box.h)))
    return 4 * box.h * math.fsum(total)


def selberg_rhs_parts(f: SyntheticFunction, box: ZeroBox,
                      spec: QuadratureSpec | None = None) -> tuple[float, float, float]:
    """(left edge, horizontal edges, right edge) with the right edge already signed."""
    spec = spec or DEFAULT_SPEC
    _check_boundary(f, box)
    for rho, _ in f.zeros:
        if rho.real >= box.w:
            raise DomainError(f"zero {rho} lies in the half plane Re >= {box.w}")
        if rho.real >= box.w1:
            raise BranchFailure(f"Re(s - {rho}) <= 0 on the right edge")
    if not f.zeros:
        return 0.0, 0.0, 0.0
    h, w0, w1 = box.h, box.w0, box.w1

    def left(t):
        return np.cos(np.pi * t / (2 * h)) * f.log_abs(w0 + 1j * t)

    def horizontal(a):
        return np.sinh(np.pi * (a - w0) / (2 * h)) * (
            f.log_abs(a + 1j * h) + f.log_abs(a - 1j * h))

    def right(t):
        k = np.cos(np.pi * (w1 - w0 + 1j * t) / (2j * h))
        return (k * f.log(w1 + 1j * t)).real

    i1, _ = integrate_finite(left, -h, h, spec, vectorized=True)
    i2, _ = integrate_finite(horizontal, w0, w1, spec, vectorized=True)
    i3, _ = integrate_finite(right, -h, h, spec, vectorized=True)
    return i1, i2, -i3


def selberg_rhs(f: SyntheticFunction, box: ZeroBox,
                spec: QuadratureSpec | None = None) -> float:
    return math.fsum(selberg_rhs_parts(f, box, spec))


def zero_config_lower_bound(n1: int, real_zeros, box: ZeroBox,
                            mirror: bool = True) -> tuple[float, float]:
    """Left side of the zero-counting inequality for a model configuration.

    Box coordinates put the centre of symmetry at 0, so c = -w0 and b = h.
    The configuration is a zero of order 2*n1 at 0 plus the listed real
    zeros; with ``mirror`` each real zero x also brings -x (functional
    equation), counted only if it falls inside the box.
    Returns (lhs, 8 b sinh(pi c / 2b)).
    """
    if n1 < 0:
        raise DomainError("n1 must be >= 0")
    if not box.w0 < 0 < box.w1:
        raise DomainError("box must contain the centre 0")
    b, c = box.h, -box.w0
    zeros = [(0j, 2 * n1)] if n1 else []
    for x in real_zeros:
        x = float(x)
        if not box.w0 < x < box.w1 or x == 0:
            raise DomainError(f"real zero {x} must lie in (w0, w1) off the centre")
        zeros.append((complex(x), 1))
        if mirror and box.w0 < -x < box.w1:
            zeros.append((complex(-x), 1))
    units = 8 * b * math.sinh(math.pi * c / (2 * b))
    if not zeros:
        return 0.0, units
    return selberg_lhs(SyntheticFunction(tuple(zeros)), box), units


def random_case(rng: np.random.Generator, max_zeros: int = 5,
                margin: float = 0.1) -> tuple[SyntheticFunction, ZeroBox]:
    """A random box and polynomial whose zeros keep ``margin`` from the boundary
    and from the half plane Re >= w."""
    w0 = float(rng.uniform(-1.0, 0.0))
    w1 = w0 + float(rng.uniform(2.0, 4.0))
    h = float(rng.uniform(0.5, 2.0))
    w = w1 - float(rng.uniform(0.2, 0.6))
    box = ZeroBox(w0, w1, h, w)
    zeros = []
    n = int(rng.integers(1, max_zeros + 1))
    while len(zeros) < n:
        rho = complex(rng.uniform(w0 - 1.0, w - margin), rng.uniform(-h - 1.0, h + 1.0))
        if box.boundary_distance(rho) >= margin:
            zeros.append((rho, int(rng.integers(1, 3))))
    return SyntheticFunction(tuple(zeros)), box

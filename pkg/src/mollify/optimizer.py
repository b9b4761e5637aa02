"""Two-stage search over (Upsilon, c_tilde) for the smallest zero bound.

A coarse grid locates a basin, then a Nelder-Mead simplex started from the
grid argmin polishes it.  Both stages are deterministic; the grid may be
evaluated by several threads (MOLLIFY_THREADS) and is merged by index.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, MollifyError
from .exponents import as_rational, delta_max
from .moment import BoundResult, zero_bound
from .quadrature import QuadratureSpec

logger = logging.getLogger(__name__)

__all__ = ["SearchSpace", "OptimizationResult", "evaluate_theorem_a", "optimize",
           "worker_count"]


@dataclass(frozen=True)
class SearchSpace:
    upsilon_range: tuple = (0.30, 0.60)
    c_range: tuple = (10.0, 40.0)
    grid: tuple = (24, 24)
    polish_iterations: int = 200

    def __post_init__(self):
        (ulo, uhi), (clo, chi) = self.upsilon_range, self.c_range
        if not (0 < ulo <= uhi < 1):
            raise DomainError(f"upsilon range {self.upsilon_range} not inside (0, 1)")
        if not (0 < clo <= chi <= 200):
            raise DomainError(f"c range {self.c_range} not inside (0, 200]")
        if min(self.grid) < 2:
            raise DomainError("grid dimensions must be >= 2")
        if self.polish_iterations < 0:
            raise DomainError("polish_iterations must be >= 0")

    def grid_points(self) -> list[tuple[float, float]]:
        us = np.linspace(*self.upsilon_range, self.grid[0])
        cs = np.linspace(*self.c_range, self.grid[1])
        return [(float(u), float(c)) for u in us for c in cs]


@dataclass(frozen=True)
class OptimizationResult:
    best_upsilon: float
    best_c_tilde: float
    result: BoundResult
    evaluations: int
    trace: tuple = field(default=(), compare=False, repr=False)


def worker_count() -> int:
    raw = os.environ.get("MOLLIFY_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"MOLLIFY_THREADS={raw!r} is not an integer") from None
    if n < 1:
        raise DomainError("MOLLIFY_THREADS must be >= 1")
    return n


def evaluate_theorem_a(theta, upsilon: float, c_tilde: float, guard: float = 1e-10,
                       spec: QuadratureSpec | None = None) -> BoundResult:
    """zero_bound at Delta = Delta_max(theta) - guard."""
    th = as_rational(theta)
    if not 0 <= th < Fraction(1, 2):
        raise DomainError(f"theta={th} outside [0, 1/2)")
    delta = float(delta_max(th)) - guard
    return zero_bound(upsilon, c_tilde, delta, guard, spec)


def _safe_bound(theta, u, c, guard, spec) -> float:
    try:
        return evaluate_theorem_a(theta, u, c, guard, spec).bound
    except (MollifyError, ValueError) as exc:
        logger.debug("infeasible point (%g, %g): %s", u, c, exc)
        return math.inf


def optimize(theta, space: SearchSpace | None = None, guard: float = 1e-10,
             spec: QuadratureSpec | None = None,
             workers: int | None = None) -> OptimizationResult:
    space = space or SearchSpace()
    th = as_rational(theta)
    points = space.grid_points()
    workers = workers or worker_count()

    def job(pt):
        return _safe_bound(th, pt[0], pt[1], guard, spec)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(job, points))   # map keeps index order
    else:
        values = [job(pt) for pt in points]
    evaluations = len(points)

    best_idx = min(range(len(points)), key=lambda i: (values[i], i))
    if not math.isfinite(values[best_idx]):
        raise DomainError("no feasible grid point")
    best_u, best_c = points[best_idx]
    best_val = values[best_idx]
    trace = [("grid", best_u, best_c, best_val)]

    # polish only along coordinates with a non-degenerate range
    free = [i for i, r in enumerate((space.upsilon_range, space.c_range)) if r[0] < r[1]]
    if free and space.polish_iterations > 0:
        base = np.array([best_u, best_c])
        bounds = [space.upsilon_range, space.c_range]
        steps = [
            (space.upsilon_range[1] - space.upsilon_range[0]) / (space.grid[0] - 1),
            (space.c_range[1] - space.c_range[0]) / (space.grid[1] - 1),
        ]
        counter = [0]

        def objective(x):
            pt = base.copy()
            pt[free] = x
            counter[0] += 1
            val = _safe_bound(th, float(pt[0]), float(pt[1]), guard, spec)
            trace.append(("polish", float(pt[0]), float(pt[1]), val))
            return val

        x0 = base[free]
        simplex = [x0.copy()]
        for j, i in enumerate(free):
            vertex = x0.copy()
            lo, hi = bounds[i]
            h = 0.5 * steps[i]
            # step inward when the grid argmin sits on the upper edge
            vertex[j] = vertex[j] + h if vertex[j] + h <= hi else vertex[j] - h
            simplex.append(vertex)
        res = minimize(objective, x0, method="Nelder-Mead",
                       bounds=[bounds[i] for i in free],
                       options={"maxiter": space.polish_iterations,
                                "initial_simplex": np.array(simplex),
                                "xatol": 1e-7, "fatol": 1e-12})
        evaluations += counter[0]
        if res.fun < best_val:
            pt = base.copy()
            pt[free] = res.x
            best_u, best_c, best_val = float(pt[0]), float(pt[1]), float(res.fun)

    final = evaluate_theorem_a(th, best_u, best_c, guard, spec)
    evaluations += 1
    return OptimizationResult(best_upsilon=best_u, best_c_tilde=best_c, result=final,
                              evaluations=evaluations, trace=tuple(trace))

"""Independent reference computations used by several test modules.

Nothing here imports the package's closed forms: V is integrated straight
from its definition with a fixed composite Simpson rule.
"""

import math

import numpy as np
from scipy.integrate import simpson


def cubic(upsilon):
    """P, P', P'' of 3(x/Y)^2 - 2(x/Y)^3 as plain callables."""
    y = upsilon
    return (lambda x: 3 * (x / y) ** 2 - 2 * (x / y) ** 3,
            lambda x: 6 * x / y ** 2 - 6 * x ** 2 / y ** 3,
            lambda x: 6 / y ** 2 - 12 * x / y ** 3)


def v_simpson(u, v, delta, upsilon, n=10_000):
    _, p1, p2 = cubic(upsilon)
    x = np.linspace(0.0, upsilon, n + 1)
    w = 1.0 / (2.0 * complex(u, v) * delta)
    integrand = np.exp(-2 * u * delta * (1 - x)) * np.abs(p1(x) + p2(x) * w) ** 2
    integral = simpson(integrand, x=x)
    diff = math.sinh(u) / u - (math.sin(v) / v if v else 1.0) if u else 1.0 - math.sin(v) / v
    return 1.0 + math.exp(-u) / delta * diff * integral


def log_v_simpson(u, v, delta, upsilon, n=10_000):
    return math.log(v_simpson(u, v, delta, upsilon, n))

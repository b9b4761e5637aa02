"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each row reports the best-of-N wall time per call for both backends and the
speedup.  Results from the two backends are also compared so a regression in
either shows up here as well as in the test suite.
"""

import argparse
import time

import numpy as np

from mollify import kernels
from mollify.moment import default_p

DELTA = 25 / 668 - 1e-10
POLY = default_p(0.44)
ARGS = (DELTA, POLY.upsilon_float, POLY.fwd, POLY.bwd)


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    rng = np.random.default_rng(1)
    us = rng.uniform(-30, 30, 20_000)
    vs = rng.uniform(-30, 30, 20_000)
    ts = np.linspace(-20, 20, 4_000)
    xs = np.linspace(0.0, 40.0, 4_000)
    return {
        "log_v_many (20k points)":
            lambda k: k.log_v_many(us, vs, *ARGS),
        "j1_integrand_many (4k)":
            lambda k: k.j1_integrand_many(ts, 23.0, 14.0, *ARGS),
        "j2_integrand_many (4k)":
            lambda k: k.j2_integrand_many(xs, 23.0, 14.0, *ARGS),
        "kloosterman_block 20x20, c=997":
            lambda k: k.kloosterman_block(20, 20, 997),
        "kloosterman scalar x2000":
            lambda k: [k.kloosterman(3, 5, c) for c in range(1, 2001)],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; run pip install -e . first")
    print(f"{'kernel':<34}{'python':>12}{'compiled':>12}{'speedup':>10}{'max diff':>12}")
    for name, fn in cases().items():
        tp, outp = best_of(lambda: fn(kernels.python_backend), args.repeat)
        tc, outc = best_of(lambda: fn(kernels.compiled_backend), args.repeat)
        a = np.asarray(outp, dtype=float)
        b = np.asarray(outc, dtype=float)
        diff = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))
        print(f"{name:<34}{tp * 1e3:>10.2f}ms{tc * 1e3:>10.2f}ms{tp / tc:>9.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()

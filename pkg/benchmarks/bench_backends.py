#!/usr/bin/env python3
"""Times the compiled kernels against the NumPy fallback.

Run from the repository root after installing the package:

    python benchmarks/bench_backends.py [--repeats N]

Workloads cover the two hot paths: expression evaluation over large point
sets and the convexity scans (including the quartic-cost joint scan).
"""
import argparse
import time

import numpy as np

from rconvex import kernels
from rconvex.convexity import GridSpec, check_jointly_r_convex, check_r_convex_1d
from rconvex.funcmodel import Interval, PositiveFunction, Rectangle

UNIT = Interval(0.0, 1.0)
SQUARE = Rectangle(UNIT, UNIT)


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads():
    f1 = PositiveFunction.from_text("exp(0.7*x + 0.1) * (x + 1.2)^1.5 + 0.3", UNIT)
    f2 = PositiveFunction.from_text("exp(0.4*x + 0.3*y) + (x + y + 0.5)^2", SQUARE)
    member = PositiveFunction.from_text("exp(x + y)", SQUARE)
    xs_big = np.linspace(0.0, 1.0, 1_000_000)
    xs_outer = np.linspace(0.0, 1.0, 1500)
    ys_outer = np.linspace(0.0, 1.0, 1400)
    batch = [PositiveFunction.from_text(f"(x + {0.1 + 0.01 * k})^2 + {0.2 + 0.01 * k}", UNIT)
             for k in range(200)]
    coarse = GridSpec(points_per_axis=9)

    yield ("eval 1e6 points, 1-D expr",
           lambda: kernels.eval_elementwise(f1.program, xs_big))
    yield ("eval outer 1500x1400, 2-D expr",
           lambda: kernels.eval_outer(f2.program, xs_outer, ys_outer))
    yield ("interval scan x200 (17-pt grid)",
           lambda: [check_r_convex_1d(f, 0.5) for f in batch])
    yield ("joint scan, 17-pt grid (2.1M combos)",
           lambda: check_jointly_r_convex(member, 0.5))
    yield ("joint scan, 9-pt grid",
           lambda: check_jointly_r_convex(member, 0.5, coarse))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    names = kernels.available_backends()
    print(f"backends: {', '.join(names)} (active: {kernels.backend_name()})")
    rows = []
    for label, fn in workloads():
        times = {}
        for name in names:
            with kernels.use_backend(name):
                fn()  # warm-up
                times[name] = timeit(fn, args.repeats)
        rows.append((label, times))

    width = max(len(label) for label, _ in rows)
    header = f"{'workload':<{width}}  " + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, times in rows:
        line = f"{label:<{width}}  " + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) == 2:
            line += f"{times['fallback'] / times['native']:>9.2f}x"
        print(line)


if __name__ == "__main__":
    main()

"""Timing comparison of the two cascade-interpolation kernels.

Usage: python benchmarks/bench_cascade.py [--sizes 128,256,512] [--repeat 5]
"""

import argparse
import time

import numpy as np

from euler2d import _cascade_py, spectral

try:
    from euler2d import _cascade_cy
except ImportError:
    _cascade_cy = None


def make_case(n, amp=0.05, seed=0):
    a, b = spectral.grid_coordinates(n)
    rng = np.random.default_rng(seed)
    w = rng.normal(size=(n, n))
    x = np.ascontiguousarray(a + amp * np.sin(b + 1.0))
    y = np.ascontiguousarray(b + amp * np.sin(a))
    return x, y, np.ascontiguousarray(w)


def time_kernel(kernel, case, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kernel.cascade(*case)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="128,256,512")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'n':>6} {'python [ms]':>12} {'compiled [ms]':>14} {'speedup':>8} {'max diff':>10}")
    for n in sizes:
        case = make_case(n)
        t_py, out_py = time_kernel(_cascade_py, case, args.repeat)
        if _cascade_cy is None:
            print(f"{n:>6} {1e3 * t_py:>12.2f} {'n/a':>14} {'n/a':>8} {'n/a':>10}")
            continue
        t_cy, out_cy = time_kernel(_cascade_cy, case, args.repeat)
        diff = float(np.max(np.abs(out_py - out_cy)))
        print(
            f"{n:>6} {1e3 * t_py:>12.2f} {1e3 * t_cy:>14.2f} "
            f"{t_py / t_cy:>8.1f} {diff:>10.1e}"
        )


if __name__ == "__main__":
    main()

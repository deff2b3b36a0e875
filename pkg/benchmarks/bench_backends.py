#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the hot paths on both backends and prints a speedup table:

    python3 benchmarks/bench_backends.py [--n 1e6] [--repeats 5]

The binary32 accumulation results are asserted bit-identical between the
backends before timing.
"""

import argparse
import time

import numpy as np

from dotbounds._kernels import numpy_backend

try:
    from dotbounds._kernels import numba_backend
except ImportError:
    numba_backend = None


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=float, default=1e6, help="vector length (default: 1e6)")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats (default: 5)")
    args = ap.parse_args()
    n = int(args.n)

    rng = np.random.default_rng(1)
    x32 = rng.standard_normal(n).astype(np.float32)
    y32 = rng.standard_normal(n).astype(np.float32)
    x64 = rng.standard_normal(n)
    y64 = rng.standard_normal(n)
    absp = np.abs(x32.astype(np.float64) * y32.astype(np.float64))
    u = 2.0**-24

    cases = [
        ("accumulate_final_b32", lambda k: k.accumulate_final_b32(x32, y32)),
        ("accumulate_trace_b32", lambda k: k.accumulate_trace_b32(x32, y32)),
        ("exact_dot_b32", lambda k: k.exact_dot_b32(x32, y32)),
        ("exact_dot_b64", lambda k: k.exact_dot_b64(x64, y64)),
        ("martingale_coeffs", lambda k: k.martingale_coeffs(absp, u)),
        ("martingale_sumsq", lambda k: k.martingale_sumsq(absp, u)),
    ]

    if numba_backend is None:
        print("numba not importable; timing the numpy fallback only")
    else:
        # warm the JIT and confirm the binary32 paths agree bit for bit
        for name, fn in cases:
            fn(numba_backend)
        assert numpy_backend.accumulate_final_b32(x32, y32) == numba_backend.accumulate_final_b32(x32, y32)
        a = numpy_backend.accumulate_trace_b32(x32[:10_000], y32[:10_000])
        b = numba_backend.accumulate_trace_b32(x32[:10_000], y32[:10_000])
        assert all(np.array_equal(p, q) for p, q in zip(a, b))

    print(f"n = {n:,}, best of {args.repeats}")
    header = f"{'kernel':<24}{'numpy (s)':>12}{'numba (s)':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in cases:
        t_np = best_of(lambda: fn(numpy_backend), args.repeats)
        if numba_backend is None:
            print(f"{name:<24}{t_np:>12.4f}{'-':>12}{'-':>10}")
        else:
            t_nb = best_of(lambda: fn(numba_backend), args.repeats)
            print(f"{name:<24}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()

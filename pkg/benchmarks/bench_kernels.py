#!/usr/bin/env python3
"""Benchmark the weighted cosine-accumulation kernel.

Compares the compiled path against the pure-numpy fallback on matrices
shaped like real daily workloads (rows = words or sentences, columns =
embedding dimension). Run from a checkout with the package installed:

    python benchmarks/bench_kernels.py [--repeat N]

Set TRENDSIM_NO_NUMBA=1 to see how the package behaves when the compiled
path is disabled (both columns then use the numpy fallback).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from trendsim._kernels import NUMBA_ENABLED, cosine_sum, cosine_sum_numpy

SHAPES = [
    (50, 16),       # word method, small synthetic lexicon
    (1000, 300),    # word method, realistic top-n and dimension
    (5000, 300),    # sentence method, mid-size day
    (20000, 512),   # sentence method, heavy day
]


def _time(fn, vectors, weights, target, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(vectors, weights, target)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=7, help="timing repetitions (best-of)")
    args = parser.parse_args()

    print(f"compiled kernel available: {NUMBA_ENABLED}")
    header = f"{'rows x dim':>14}  {'kernel':>12}  {'numpy':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    rng = np.random.default_rng(7)
    for rows, dim in SHAPES:
        vectors = np.ascontiguousarray(rng.standard_normal((rows, dim)))
        weights = np.ones(rows, dtype=np.float64)
        target = np.ascontiguousarray(rng.standard_normal(dim))
        cosine_sum(vectors, weights, target)  # warm-up (trigger compilation)
        t_kernel = _time(cosine_sum, vectors, weights, target, args.repeat)
        t_numpy = _time(cosine_sum_numpy, vectors, weights, target, args.repeat)
        print(
            f"{rows:>9} x {dim:<3}  {t_kernel * 1e3:>10.3f}ms  {t_numpy * 1e3:>10.3f}ms  "
            f"{t_numpy / t_kernel:>7.2f}x"
        )


if __name__ == "__main__":
    main()

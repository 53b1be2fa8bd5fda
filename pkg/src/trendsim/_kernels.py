"""Batched cosine-accumulation kernels for the daily scoring loop.

The weighted cosine sum over (items x dim) matrices is the one numeric
hot spot of a run (up to ~10^5 sentence vectors per day). By default it is
JIT-compiled with numba; set ``TRENDSIM_NO_NUMBA=1`` to force the pure
numpy path (also used automatically when numba is not installed). Both
paths accumulate in float64 and agree to ~1e-12 relative.

``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np


def _want_numba() -> bool:
    if os.environ.get("TRENDSIM_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _want_numba()


def cosine_sum_numpy(vectors: np.ndarray, weights: np.ndarray, target: np.ndarray) -> float:
    """sum_i weights[i] * cos(vectors[i], target), vectorized numpy path."""
    dots = vectors @ target
    norms = np.sqrt(np.einsum("ij,ij->i", vectors, vectors))
    tnorm = float(np.sqrt(target @ target))
    return float(np.sum(weights * dots / (norms * tnorm)))


if NUMBA_ENABLED:
    from numba import njit

    @njit(cache=True, nogil=True)
    def _cosine_sum_jit(vectors, weights, target):  # pragma: no cover - compiled
        n, d = vectors.shape
        tsq = 0.0
        for j in range(d):
            tsq += target[j] * target[j]
        tnorm = np.sqrt(tsq)
        total = 0.0
        for i in range(n):
            dot = 0.0
            sq = 0.0
            for j in range(d):
                v = vectors[i, j]
                dot += v * target[j]
                sq += v * v
            total += weights[i] * dot / (np.sqrt(sq) * tnorm)
        return total

    def cosine_sum(vectors: np.ndarray, weights: np.ndarray, target: np.ndarray) -> float:
        return float(_cosine_sum_jit(vectors, weights, target))

else:
    cosine_sum = cosine_sum_numpy


def kernel_backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def as_kernel_matrix(rows: list[np.ndarray]) -> np.ndarray:
    """Stack row vectors into the contiguous float64 matrix kernels expect."""
    return np.ascontiguousarray(np.stack(rows), dtype=np.float64)

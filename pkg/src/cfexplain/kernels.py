"""Hot numeric kernels for candidate scoring.

Numba-jitted by default; set CFEXPLAIN_DISABLE_NUMBA=1 to force the pure
numpy path (used by the benchmark and as a fallback where numba is absent).
Both paths compute identical values for the same float64 inputs.
"""

from __future__ import annotations

import os

import numpy as np


def _numpy_cosine_scores(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.einsum("ij,ij->i", matrix, matrix))
    qnorm = np.sqrt(query @ query)
    scores = matrix @ query
    out = np.zeros(len(matrix))
    ok = (norms > 0.0) & (qnorm > 0.0)
    out[ok] = scores[ok] / (norms[ok] * qnorm)
    return out


def _numpy_mean_pool(flat: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    n = len(offsets) - 1
    out = np.empty((n, flat.shape[1]))
    for i in range(n):
        out[i] = flat[offsets[i] : offsets[i + 1]].mean(axis=0)
    return out


USE_NUMBA = os.environ.get("CFEXPLAIN_DISABLE_NUMBA", "") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:
        USE_NUMBA = False

if USE_NUMBA:

    @njit(cache=True)
    def _numba_cosine_scores(matrix, query):
        n, k = matrix.shape
        qnorm = 0.0
        for j in range(k):
            qnorm += query[j] * query[j]
        qnorm = np.sqrt(qnorm)
        out = np.zeros(n)
        for i in range(n):
            dot = 0.0
            norm = 0.0
            for j in range(k):
                dot += matrix[i, j] * query[j]
                norm += matrix[i, j] * matrix[i, j]
            norm = np.sqrt(norm)
            if norm > 0.0 and qnorm > 0.0:
                out[i] = dot / (norm * qnorm)
        return out

    @njit(cache=True)
    def _numba_mean_pool(flat, offsets):
        n = len(offsets) - 1
        k = flat.shape[1]
        out = np.empty((n, k))
        for i in range(n):
            lo, hi = offsets[i], offsets[i + 1]
            for j in range(k):
                acc = 0.0
                for r in range(lo, hi):
                    acc += flat[r, j]
                out[i, j] = acc / (hi - lo)
        return out

    cosine_scores = _numba_cosine_scores
    mean_pool = _numba_mean_pool
else:
    cosine_scores = _numpy_cosine_scores
    mean_pool = _numpy_mean_pool

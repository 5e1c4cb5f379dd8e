"""NumPy implementations of the compiled kernels in ``_kernels.pyx``.

Same signatures and return conventions; used when the extension is not built
or when ``FRADEX_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import math

import numpy as np

_CHUNK = 1 << 20


def fold_gl_weights(alpha: float, period: int, tol: float, max_terms: int):
    w = np.zeros(period, dtype=np.float64)
    w[0] = 1.0
    g = 1.0
    s = 1.0
    k = 0
    while k < max_terms:
        hi = min(k + _CHUNK, max_terms)
        idx = np.arange(k + 1, hi + 1, dtype=np.float64)
        # same multiplicative recurrence, vectorised one chunk at a time
        gs = g * np.cumprod((idx - 1.0 - alpha) / idx)
        s_end = math.fsum(np.concatenate(([s], gs)))
        # tail after each index: -(sum to chunk end) plus what follows in the
        # chunk, accumulated from the small end so rounding stays tiny
        after = np.concatenate((np.cumsum(gs[:0:-1])[::-1], [0.0]))
        tails = after - s_end
        hit = np.flatnonzero(tails < tol)
        stop = hit[0] + 1 if hit.size else gs.size
        buckets = np.arange(k + 1, k + 1 + stop, dtype=np.int64) % period
        w += np.bincount(buckets[::-1], weights=gs[:stop][::-1], minlength=period)
        g = float(gs[stop - 1])
        s = -float(tails[stop - 1])
        k += stop
        if hit.size:
            break
    return w, k, -s


def lu_factor_inplace(a: np.ndarray, piv: np.ndarray) -> int:
    n = a.shape[0]
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        piv[k] = p
        if a[p, k] == 0.0:
            return k
        if p != k:
            a[[k, p]] = a[[p, k]]
        col = a[k + 1 :, k]
        col /= a[k, k]
        a[k + 1 :, k + 1 :] -= np.outer(col, a[k, k + 1 :])
    return -1


def lu_solve_inplace(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> None:
    n = lu.shape[0]
    for i in range(n):
        p = piv[i]
        if p != i:
            b[[i, p]] = b[[p, i]]
    for i in range(1, n):
        b[i] -= lu[i, :i] @ b[:i]
    for i in range(n - 1, -1, -1):
        b[i] -= lu[i, i + 1 :] @ b[i + 1 :]
        b[i] /= lu[i, i]


def implicit_euler_march(lu: np.ndarray, piv: np.ndarray, u0: np.ndarray, n_steps: int):
    out = np.empty((n_steps + 1,) + u0.shape, dtype=np.float64)
    out[0] = u0
    for s in range(1, n_steps + 1):
        out[s] = out[s - 1]
        lu_solve_inplace(lu, piv, out[s])
    return out

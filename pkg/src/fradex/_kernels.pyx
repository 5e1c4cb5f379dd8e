# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. ``fradex._pykernels`` mirrors this API in NumPy."""

import numpy as np

from libc.math cimport fabs


cdef inline void _neumaier(double* total, double* comp, double x) noexcept nogil:
    cdef double t = total[0] + x
    if fabs(total[0]) >= fabs(x):
        comp[0] += (total[0] - t) + x
    else:
        comp[0] += (x - t) + total[0]
    total[0] = t


def fold_gl_weights(double alpha, Py_ssize_t period, double tol, long long max_terms):
    """Fold g_0, g_1, ... into ``period`` buckets by index modulo ``period``.

    Stops at the first k >= 1 whose remaining mass ``-sum(g_0..g_k)`` drops
    below ``tol`` (or at ``max_terms``). Returns ``(weights, k, tail)``.
    Bucket and partial sums are compensated: tens of millions of terms go
    into each and plain summation would drift past small tolerances.
    """
    w = np.zeros(period, dtype=np.float64)
    comp = np.zeros(period, dtype=np.float64)
    cdef double[::1] wv = w
    cdef double[::1] cv = comp
    cdef double g = 1.0
    cdef double s = 1.0
    cdef double sc = 0.0
    cdef long long k = 0
    cdef Py_ssize_t r = 0
    wv[0] = 1.0
    with nogil:
        while k < max_terms:
            k += 1
            r += 1
            if r == period:
                r = 0
            g = g * ((k - 1) - alpha) / k
            _neumaier(&s, &sc, g)
            _neumaier(&wv[r], &cv[r], g)
            if -(s + sc) < tol:
                break
    return w + comp, k, -(s + sc)


cdef Py_ssize_t _lu_factor(double[:, ::1] a, Py_ssize_t[::1] piv) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef double big, t, l, pivot
    for k in range(n):
        p = k
        big = fabs(a[k, k])
        for i in range(k + 1, n):
            t = fabs(a[i, k])
            if t > big:
                big = t
                p = i
        piv[k] = p
        if big == 0.0:
            return k
        if p != k:
            for j in range(n):
                t = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = t
        pivot = a[k, k]
        for i in range(k + 1, n):
            l = a[i, k] / pivot
            a[i, k] = l
            if l != 0.0:
                for j in range(k + 1, n):
                    a[i, j] -= l * a[k, j]
    return -1


def lu_factor_inplace(double[:, ::1] a, Py_ssize_t[::1] piv):
    """Row-pivoted Doolittle LU in place. Returns -1, or the column of a zero pivot."""
    cdef Py_ssize_t bad
    with nogil:
        bad = _lu_factor(a, piv)
    return bad


cdef void _solve_columns(const double[:, ::1] lu, const Py_ssize_t[::1] piv,
                         double[:, ::1] b) noexcept nogil:
    cdef Py_ssize_t n = lu.shape[0]
    cdef Py_ssize_t m = b.shape[1]
    cdef Py_ssize_t i, j, c, p
    cdef double t
    for i in range(n):
        p = piv[i]
        if p != i:
            for c in range(m):
                t = b[i, c]
                b[i, c] = b[p, c]
                b[p, c] = t
    for i in range(1, n):
        for j in range(i):
            t = lu[i, j]
            if t != 0.0:
                for c in range(m):
                    b[i, c] -= t * b[j, c]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            t = lu[i, j]
            if t != 0.0:
                for c in range(m):
                    b[i, c] -= t * b[j, c]
        t = lu[i, i]
        for c in range(m):
            b[i, c] /= t


def lu_solve_inplace(const double[:, ::1] lu, const Py_ssize_t[::1] piv, double[:, ::1] b):
    with nogil:
        _solve_columns(lu, piv, b)


def implicit_euler_march(const double[:, ::1] lu, const Py_ssize_t[::1] piv,
                         const double[:, ::1] u0, Py_ssize_t n_steps):
    """States u^0..u^n_steps of (I - tau A) u^{n+1} = u^n, shape (n_steps+1, n, m)."""
    cdef Py_ssize_t n = u0.shape[0]
    cdef Py_ssize_t m = u0.shape[1]
    out = np.empty((n_steps + 1, n, m), dtype=np.float64)
    cdef double[:, :, ::1] ov = out
    cdef Py_ssize_t s, i, c
    with nogil:
        for i in range(n):
            for c in range(m):
                ov[0, i, c] = u0[i, c]
        for s in range(1, n_steps + 1):
            for i in range(n):
                for c in range(m):
                    ov[s, i, c] = ov[s - 1, i, c]
            _solve_columns(lu, piv, ov[s])
    return out

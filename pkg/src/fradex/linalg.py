"""Small dense linear algebra: LU with partial pivoting and max-norm helpers.

Matrices are 2-D float64 NumPy arrays. The factorization and triangular
solves run in the compiled kernel when it is available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fradex._backend import kernels


class SingularMatrixError(ArithmeticError):
    """A pivot column was exactly zero on and below the diagonal."""


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class LuFactorization:
    """Combined ``L\\U`` storage plus LAPACK-style row interchanges.

    Row ``k`` was swapped with row ``piv[k]`` at elimination step ``k``,
    so ``P @ A == L @ U`` with ``P`` from :meth:`permutation`.
    """

    lu: np.ndarray
    piv: np.ndarray

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def lower(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.n)

    def upper(self) -> np.ndarray:
        return np.triu(self.lu)

    def permutation(self) -> np.ndarray:
        order = np.arange(self.n)
        for k, p in enumerate(self.piv):
            order[[k, p]] = order[[p, k]]
        return np.eye(self.n)[order]

    def solve(self, rhs) -> np.ndarray:
        return lu_solve(self, rhs)


def lu_factor(a) -> LuFactorization:
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"LU needs a square matrix, got shape {a.shape}")
    lu = np.array(a, dtype=np.float64, order="C", copy=True)
    piv = np.zeros(a.shape[0], dtype=np.intp)
    bad = kernels.lu_factor_inplace(lu, piv)
    if bad >= 0:
        raise SingularMatrixError(f"zero pivot in column {bad}")
    lu.flags.writeable = False
    piv.flags.writeable = False
    return LuFactorization(lu, piv)


def lu_solve(f: LuFactorization, rhs) -> np.ndarray:
    """Solve ``A x = rhs`` for a vector or a matrix of right-hand sides."""
    b = np.array(rhs, dtype=np.float64, order="C", copy=True)
    if b.ndim not in (1, 2) or b.shape[0] != f.n:
        raise ValueError(f"right-hand side shape {b.shape} does not match a {f.n}x{f.n} system")
    cols = b.reshape(f.n, -1)
    kernels.lu_solve_inplace(f.lu, f.piv, cols)
    return cols.reshape(b.shape)


def inverse(a) -> np.ndarray:
    """Explicit inverse via LU; only meant for small certificate checks."""
    f = lu_factor(a)
    return lu_solve(f, np.eye(f.n))


def mat_vec(a, v) -> np.ndarray:
    a = _as_matrix(a)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or a.shape[1] != v.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} matrix by vector of shape {v.shape}")
    return a @ v


def mat_mat(a, b) -> np.ndarray:
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def max_norm(v) -> float:
    v = np.asarray(v, dtype=np.float64)
    return float(np.max(np.abs(v))) if v.size else 0.0


def matrix_inf_norm(a) -> float:
    """Induced infinity norm: largest absolute row sum."""
    a = _as_matrix(a)
    return float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0

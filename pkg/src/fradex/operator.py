"""Discrete Riesz operator on the cell-centred grid with reflecting walls.

Two independent constructions of the same matrix ``A(alpha, h)``:

* :func:`assemble_series` sums the shifted (p = 1) Grünwald–Letnikov
  kernel through the even extension: row ``j`` receives
  ``C_sigma / h**alpha * g_l`` in the columns that indices ``j + l - 1`` and
  ``j - l + 1`` map back to, for every ``l >= 0``;
* :func:`assemble_spectral` rebuilds the matrix from its closed-form
  cosine eigenpairs, ``A = B diag(lambda) B^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from fradex.extension import NeumannIndexMap, neumann_index
from fradex.gl_coeff import DEFAULT_TOLERANCE, FractionalOrder, fold_coefficients
from fradex.linalg import mat_mat, mat_vec, matrix_inf_norm, max_norm

Method = Literal["series", "spectral"]


@dataclass(frozen=True)
class Grid:
    """``n_points = N + 1`` cells of width ``h = 1/n_points`` on [0, 1]."""

    n_points: int

    def __post_init__(self) -> None:
        if int(self.n_points) != self.n_points or self.n_points < 1:
            raise ValueError(f"n_points must be a positive integer, got {self.n_points!r}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def N(self) -> int:
        return self.n_points - 1

    @property
    def h(self) -> float:
        return 1.0 / self.n_points

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.n_points) + 0.5) * self.h


@dataclass(frozen=True)
class RieszParams:
    alpha: float
    sigma: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", FractionalOrder(self.alpha).alpha)
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def c_sigma(self) -> float:
        return -self.sigma / (2.0 * math.cos(self.alpha * math.pi / 2.0))


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    basis: np.ndarray
    inverse_basis: np.ndarray


@dataclass(frozen=True)
class OperatorMatrix:
    a: np.ndarray
    params: RieszParams
    grid: Grid
    method: Method
    series_tolerance: float | None = None
    n_terms: int | None = None

    @property
    def scale(self) -> float:
        """``C_sigma / h**alpha``, the prefactor of every GL term."""
        return self.params.c_sigma / self.grid.h**self.params.alpha

    def defect_bound(self) -> float:
        """Admissible |row sum| (and |column sum|) for this construction."""
        if self.method == "series":
            return 2.0 * self.scale * self.series_tolerance
        return 1e-10 * matrix_inf_norm(self.a)

    def row_sums(self) -> np.ndarray:
        return self.a.sum(axis=1)

    def column_sums(self) -> np.ndarray:
        return self.a.sum(axis=0)


def cosine_basis(grid: Grid) -> np.ndarray:
    """Column ``k`` is ``cos(k pi x_j)`` sampled on the nodes."""
    k = np.arange(grid.n_points)
    return np.cos(np.pi * np.outer(grid.nodes, k))


def inverse_basis(grid: Grid) -> np.ndarray:
    """Closed-form ``B^{-1} = D B^T`` from discrete cosine orthogonality."""
    n = grid.n_points
    d = np.full(n, 2.0 / n)
    d[0] = 1.0 / n
    return d[:, None] * cosine_basis(grid).T


def eigenvalues(params: RieszParams, grid: Grid) -> np.ndarray:
    a = params.alpha
    h = grid.h
    kph = np.arange(grid.n_points) * math.pi * h
    lam = (
        -params.sigma
        / math.cos(a * math.pi / 2.0)
        * (2.0 / h) ** a
        * np.sin(kph / 2.0) ** a
        * np.cos(kph + a / 2.0 * (math.pi - kph))
    )
    lam[0] = 0.0
    return lam


def eigenvalue(params: RieszParams, grid: Grid, k: int) -> float:
    if not 0 <= k < grid.n_points:
        raise IndexError(f"eigenvalue index {k} outside 0..{grid.N}")
    return float(eigenvalues(params, grid)[k])


def continuous_eigenvalue(params: RieszParams, k: int) -> float:
    """Eigenvalue of the continuous operator for the mode ``cos(k pi x)``."""
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    return -params.sigma * (k * math.pi) ** params.alpha


def eigensystem(params: RieszParams, grid: Grid) -> EigenSystem:
    return EigenSystem(eigenvalues(params, grid), cosine_basis(grid), inverse_basis(grid))


def assemble_spectral(params: RieszParams, grid: Grid) -> OperatorMatrix:
    es = eigensystem(params, grid)
    a = mat_mat(es.basis * es.eigenvalues, es.inverse_basis)
    return OperatorMatrix(a, params, grid, "spectral")


def assemble_series(
    params: RieszParams,
    grid: Grid,
    tolerance: float = DEFAULT_TOLERANCE,
) -> OperatorMatrix:
    n = grid.n_points
    nmap = NeumannIndexMap(n)
    # The columns hit by term l depend on l only through l mod period, so
    # the stream is folded once and the P bucket weights scattered per row.
    folded = fold_coefficients(params.alpha, nmap.period, tolerance)
    w = folded.with_tail_deposited()
    rows = np.arange(n)[:, None]
    shift = np.arange(nmap.period)[None, :]
    left = neumann_index(nmap, rows + shift - 1)
    right = neumann_index(nmap, rows - shift + 1)
    row_idx = np.broadcast_to(rows, left.shape)
    weights = np.broadcast_to(w[None, :], left.shape)
    flat = np.zeros(n * n)
    np.add.at(flat, (row_idx * n + left).ravel(), weights.ravel())
    np.add.at(flat, (row_idx * n + right).ravel(), weights.ravel())
    scale = params.c_sigma / grid.h**params.alpha
    a = scale * flat.reshape(n, n)
    return OperatorMatrix(a, params, grid, "series", float(tolerance), folded.n_terms)


def assemble(
    params: RieszParams,
    grid: Grid,
    method: Method = "spectral",
    tolerance: float = DEFAULT_TOLERANCE,
) -> OperatorMatrix:
    if method == "spectral":
        return assemble_spectral(params, grid)
    if method == "series":
        return assemble_series(params, grid, tolerance)
    raise ValueError(f"unknown assembly method {method!r}")


def eigen_residual(op: OperatorMatrix, es: EigenSystem, k: int) -> float:
    """``||A v_k - lambda_k v_k||_inf`` for the k-th cosine eigenpair."""
    if es.basis.shape[0] != op.a.shape[0]:
        raise ValueError("eigensystem and operator sizes differ")
    v = es.basis[:, k]
    return max_norm(mat_vec(op.a, v) - es.eigenvalues[k] * v)

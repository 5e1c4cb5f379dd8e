from __future__ import annotations

import math

import numpy as np
import pytest

from fradex.linalg import inverse, matrix_inf_norm, max_norm
from fradex.operator import (
    Grid,
    RieszParams,
    assemble,
    assemble_series,
    assemble_spectral,
    cosine_basis,
    continuous_eigenvalue,
    eigen_residual,
    eigensystem,
    eigenvalue,
    eigenvalues,
    inverse_basis,
)


def reflecting_laplacian(n, sigma=1.0):
    h = 1.0 / n
    a = np.diag(np.full(n, -2.0)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    a[0, 0] = a[-1, -1] = -1.0
    return sigma * a / h**2


def test_grid():
    g = Grid(4)
    assert g.N == 3 and g.h == 0.25
    assert np.allclose(g.nodes, [0.125, 0.375, 0.625, 0.875])
    with pytest.raises(ValueError):
        Grid(0)


def test_params_validation():
    with pytest.raises(ValueError):
        RieszParams(2.5)
    with pytest.raises(ValueError):
        RieszParams(1.5, -1.0)
    assert RieszParams(2.0, 1.0).c_sigma == pytest.approx(0.5)


def test_alpha_two_series_is_laplacian():
    op = assemble_series(RieszParams(2.0, 1.0), Grid(4))
    assert np.allclose(op.a, reflecting_laplacian(4), rtol=0, atol=1e-10)
    assert op.n_terms == 2


@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0])
@pytest.mark.parametrize("method", ["series", "spectral"])
def test_constant_vector_in_kernel(alpha, method):
    op = assemble(RieszParams(alpha, 0.8), Grid(8), method, 1e-10)
    assert max_norm(op.row_sums()) <= op.defect_bound()
    assert max_norm(op.column_sums()) <= op.defect_bound()


@pytest.mark.slow
def test_cross_method_tight_tolerance():
    # needs about 2e9 weights at alpha = 1.2; only the compiled kernel is quick enough
    from fradex._backend import COMPILED

    if not COMPILED:
        pytest.skip("compiled kernels not available")
    params, grid = RieszParams(1.2, 0.25), Grid(4)
    series = assemble_series(params, grid, 1e-12)
    assert max_norm(series.a - assemble_spectral(params, grid).a) < 1e-8


@pytest.mark.parametrize("alpha", [1.3, 1.5, 1.7])
def test_cross_method(alpha):
    params, grid = RieszParams(alpha, 0.25), Grid(4)
    series = assemble_series(params, grid, 1e-10)
    gap = matrix_inf_norm(series.a - assemble_spectral(params, grid).a)
    assert gap <= 4 * series.scale * 1e-10


def test_single_cell():
    op = assemble_spectral(RieszParams(1.5), Grid(1))
    assert op.a.shape == (1, 1) and op.a[0, 0] == 0.0
    assert np.array_equal(inverse_basis(Grid(1)), [[1.0]])


def test_spectral_alpha_two_matches_series():
    params, grid = RieszParams(2.0, 1.0), Grid(8)
    assert max_norm(assemble_spectral(params, grid).a - assemble_series(params, grid).a) < 1e-10


def test_spectral_row_sums():
    op = assemble_spectral(RieszParams(1.6, 0.5), Grid(16))
    assert max_norm(op.row_sums()) < 1e-10


def test_eigenvalue_examples():
    p = RieszParams(1.2, 0.25)
    assert eigenvalue(p, Grid(4), 0) == 0.0
    with pytest.raises(IndexError):
        eigenvalue(p, Grid(4), 4)
    grid = Grid(8)
    lam = eigenvalues(RieszParams(2.0, 1.0), grid)
    k = np.arange(8)
    expected = -((2 / grid.h) ** 2) * np.sin(k * math.pi * grid.h / 2) ** 2
    assert np.allclose(lam, expected, rtol=1e-12, atol=0)


def test_eigenvalue_residual_example():
    p, grid = RieszParams(1.2, 0.25), Grid(4)
    op = assemble_series(p, grid, 1e-10)
    v = cosine_basis(grid)[:, 1]
    resid = max_norm(op.a @ v - eigenvalue(p, grid, 1) * v)
    assert resid < 10 * 1e-10 * op.scale


def test_eigenvalues_negative_and_ordered():
    lam = eigenvalues(RieszParams(1.5, 1.0), Grid(32))
    assert lam[0] == 0.0
    assert np.all(np.diff(lam) < 0)


def test_continuous_eigenvalue():
    assert continuous_eigenvalue(RieszParams(1.2, 0.25), 0) == 0.0
    assert continuous_eigenvalue(RieszParams(1.2, 0.25), 1) == pytest.approx(-0.25 * math.pi**1.2)
    assert continuous_eigenvalue(RieszParams(1.6, 0.5), 2) == pytest.approx(
        -0.5 * (2 * math.pi) ** 1.6
    )


def test_discrete_eigenvalues_approach_continuous():
    p = RieszParams(1.4, 1.0)
    gaps = []
    for n in (16, 32, 64, 128):
        gaps.append(abs(eigenvalue(p, Grid(n), 1) - continuous_eigenvalue(p, 1)))
    ratios = np.array(gaps[:-1]) / np.array(gaps[1:])
    assert np.all(ratios > 1.7)  # first order in h


def test_eigen_residuals():
    p, grid = RieszParams(1.5, 1.0), Grid(8)
    es = eigensystem(p, grid)
    spectral = assemble_spectral(p, grid)
    norm = matrix_inf_norm(spectral.a)
    assert max(eigen_residual(spectral, es, k) for k in range(8)) < 1e-10 * norm
    series = assemble_series(p, grid, 1e-12)
    assert eigen_residual(series, es, 3) < 1e-8 * matrix_inf_norm(series.a)
    assert eigen_residual(series, es, 0) == pytest.approx(max_norm(series.row_sums()), abs=1e-12)
    assert eigen_residual(series, es, 0) <= series.defect_bound()


@pytest.mark.parametrize("n", [1, 4, 8, 33])
def test_inverse_basis(n):
    grid = Grid(n)
    b = cosine_basis(grid)
    assert max_norm(b @ inverse_basis(grid) - np.eye(n)) < 1e-13 * max(1, n / 4)
    assert max_norm(inverse_basis(grid) - inverse(b)) < 1e-11


@pytest.mark.parametrize("alpha", [1.2, 1.7, 2.0])
@pytest.mark.parametrize("method", ["series", "spectral"])
def test_sign_pattern_and_centro_symmetry(alpha, method):
    op = assemble(RieszParams(alpha, 1.0), Grid(12), method, 1e-10)
    a = op.a
    assert np.all(np.diag(a) < 0)
    off = a[~np.eye(12, dtype=bool)]
    assert off.min() >= -op.defect_bound()
    assert max_norm(a - a[::-1, ::-1]) <= 1e-12 * np.abs(a).max()
    assert max_norm(a - a.T) <= 1e-12 * np.abs(a).max()


def test_consistency_on_cosine_mode():
    # A applied to cos(pi x) tends to the continuous eigenvalue times cos(pi x)
    p = RieszParams(1.5, 1.0)
    errs = []
    for n in (16, 32, 64):
        grid = Grid(n)
        v = np.cos(math.pi * grid.nodes)
        errs.append(max_norm(assemble_spectral(p, grid).a @ v - continuous_eigenvalue(p, 1) * v))
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] > 1.7


def test_unknown_method():
    with pytest.raises(ValueError):
        assemble(RieszParams(1.5), Grid(4), "fourier")

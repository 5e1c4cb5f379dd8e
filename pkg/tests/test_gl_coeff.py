from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import binom

from fradex.gl_coeff import (
    FractionalOrder,
    GlCoefficientStream,
    fold_coefficients,
    gl_coefficients,
    gl_next,
    tail_magnitude,
)

alphas = st.floats(min_value=1.0, max_value=2.0, exclude_min=True)


def advance(alpha, k):
    s = GlCoefficientStream.start(alpha)
    for _ in range(k):
        _, s = gl_next(s)
    return s


def product_binom(x, k):
    out = 1.0
    for i in range(k):
        out *= (x - i) / (i + 1)
    return out


def test_first_weights():
    assert GlCoefficientStream.start(1.2).g_current == 1.0
    g1, _ = gl_next(GlCoefficientStream.start(1.2))
    assert g1 == -1.2
    assert advance(1.5, 2).g_current == pytest.approx(0.375, abs=1e-15)
    assert advance(1.5, 2).g_current == pytest.approx(product_binom(1.5, 2), abs=1e-15)


def test_tail_examples():
    assert tail_magnitude(advance(1.2, 1)) == pytest.approx(0.2, abs=1e-15)
    assert tail_magnitude(advance(2.0, 2)) == 0.0
    with pytest.raises(ValueError):
        tail_magnitude(GlCoefficientStream.start(1.5))


def test_tail_matches_brute_force_sum():
    alpha, k, last = 1.5, 100, 10**7
    tail = tail_magnitude(advance(alpha, k))
    ls = np.arange(k + 1, last + 1, dtype=float)
    brute = math.fsum(np.abs(binom(alpha, ls)))
    # the brute force stops at 1e7; what it misses is below 1e-9 for alpha = 1.5
    assert abs(tail - brute) < 1e-9


def test_alpha_two_stream_terminates():
    assert np.array_equal(gl_coefficients(2.0, 6), [1.0, -2.0, 1.0, 0.0, 0.0, 0.0])


@pytest.mark.parametrize("bad", [1.0, 0.5, 2.1, float("nan")])
def test_order_validation(bad):
    with pytest.raises(ValueError):
        FractionalOrder(bad)


@settings(max_examples=60, deadline=None)
@given(alpha=alphas, count=st.integers(min_value=3, max_value=400))
def test_sign_pattern(alpha, count):
    g = gl_coefficients(alpha, count)
    assert g[1] == -alpha
    assert np.all(g[2:] >= 0)


@settings(max_examples=40, deadline=None)
@given(alpha=alphas, k=st.integers(min_value=0, max_value=50))
def test_partial_sums_match_product_form(alpha, k):
    s = advance(alpha, k)
    expected = (-1) ** k * product_binom(alpha - 1.0, k)
    assert s.partial_sum == pytest.approx(expected, rel=1e-10, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(min_value=1.05, max_value=1.95))
def test_tail_strictly_decreasing(alpha):
    s = advance(alpha, 1)
    prev = tail_magnitude(s)
    for _ in range(200):
        _, s = gl_next(s)
        cur = tail_magnitude(s)
        assert cur < prev
        prev = cur
    assert prev < tail_magnitude(advance(alpha, 1))


def test_stream_and_array_agree():
    g = gl_coefficients(1.37, 30)
    s = GlCoefficientStream.start(1.37)
    for k in range(1, 30):
        gk, s = gl_next(s)
        assert gk == pytest.approx(g[k], rel=1e-14, abs=0)


@pytest.mark.parametrize("alpha,period", [(1.5, 8), (1.8, 6), (2.0, 4), (1.9, 1)])
def test_fold_matches_bucketed_stream(alpha, period):
    folded = fold_coefficients(alpha, period, tolerance=1e-8)
    g = gl_coefficients(alpha, folded.n_terms + 1)
    expected = np.bincount(np.arange(g.size) % period, weights=g, minlength=period)
    assert np.allclose(folded.weights, expected, rtol=0, atol=1e-12)
    assert folded.tail < 1e-8
    assert folded.tail == pytest.approx(-g.sum(), abs=1e-12)
    # with the tail put back the weights sum to zero
    assert abs(folded.with_tail_deposited().sum()) < 1e-12


def test_fold_reports_nonconvergence():
    with pytest.raises(RuntimeError):
        fold_coefficients(1.1, 4, tolerance=1e-12, max_terms=1000)

"""Cosine-series solutions of the reflecting-wall problem, used as error references.

A solution is ``u(t, x) = F_0 + sum_k F_k exp(-sigma (k pi)^alpha t) cos(k pi x)``
where ``F_k`` are the cosine coefficients of the initial data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_K_MAX = 512
DEFAULT_PANELS = 2**14

EXPERIMENT1 = {"alpha": 1.2, "sigma": 0.25}
EXPERIMENT2 = {"alpha": 1.6, "sigma": 0.5}


@dataclass(frozen=True)
class CosineSeries:
    coefficients: np.ndarray  # F_0 .. F_kmax
    alpha: float
    sigma: float
    tail_bound: float = math.nan  # bound on sum_{k > k_max} |F_k|, nan if unknown

    @property
    def k_max(self) -> int:
        return self.coefficients.size - 1

    def decay_rates(self) -> np.ndarray:
        k = np.arange(self.coefficients.size)
        return self.sigma * (k * math.pi) ** self.alpha


def initial_experiment1(x):
    x = np.asarray(x, dtype=float)
    return x**4 / 4.0 - x**2 / 2.0


def initial_experiment2(x):
    x = np.asarray(x, dtype=float)
    return 2.0 * x**2 - 4.0 / 3.0 * x**3


def _quartic_tail(c: float, k_max: int) -> float:
    # sum_{k>K} c/k^4 <= c / (3 K^3)
    return c / (3.0 * k_max**3)


def coefficients_experiment1(
    k_max: int = DEFAULT_K_MAX,
    alpha: float = EXPERIMENT1["alpha"],
    sigma: float = EXPERIMENT1["sigma"],
) -> CosineSeries:
    """Cosine coefficients of ``x^4/4 - x^2/2``."""
    k = np.arange(1, k_max + 1, dtype=float)
    f = np.empty(k_max + 1)
    f[0] = -14.0 / 120.0
    f[1:] = np.where(k % 2 == 1, 1.0, -1.0) * 12.0 / (k * math.pi) ** 4
    return CosineSeries(f, alpha, sigma, _quartic_tail(12.0 / math.pi**4, k_max))


def coefficients_experiment2(
    k_max: int = DEFAULT_K_MAX,
    alpha: float = EXPERIMENT2["alpha"],
    sigma: float = EXPERIMENT2["sigma"],
) -> CosineSeries:
    """Cosine coefficients of ``2x^2 - 4x^3/3``; the even modes vanish."""
    k = np.arange(1, k_max + 1, dtype=float)
    f = np.empty(k_max + 1)
    f[0] = 1.0 / 3.0
    f[1:] = 16.0 * (np.where(k % 2 == 0, 1.0, -1.0) - 1.0) / (k * math.pi) ** 4
    return CosineSeries(f, alpha, sigma, _quartic_tail(32.0 / math.pi**4, k_max))


def simpson_weights(panels: int) -> np.ndarray:
    if panels < 2 or panels % 2:
        raise ValueError("composite Simpson needs an even number of panels")
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * panels)


def coefficients_from_samples(
    f,
    k_max: int = DEFAULT_K_MAX,
    panels: int = DEFAULT_PANELS,
    alpha: float = EXPERIMENT1["alpha"],
    sigma: float = EXPERIMENT1["sigma"],
) -> CosineSeries:
    """Cosine coefficients of a vectorised callable by composite Simpson on [0, 1]."""
    x = np.linspace(0.0, 1.0, panels + 1)
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    if not np.all(np.isfinite(fx)):
        raise ValueError("initial data has non-finite samples")
    wf = simpson_weights(panels) * fx
    k = np.arange(k_max + 1)
    coeffs = 2.0 * (np.cos(math.pi * np.outer(k, x)) @ wf)
    coeffs[0] *= 0.5
    return CosineSeries(coeffs, alpha, sigma)


def evaluate(series: CosineSeries, t: float, x) -> np.ndarray | float:
    if t < 0:
        raise ValueError("time must be nonnegative")
    x_arr = np.asarray(x, dtype=float)
    amp = series.coefficients * np.exp(-series.decay_rates() * t)
    k = np.arange(series.coefficients.size)
    out = np.cos(math.pi * np.multiply.outer(x_arr, k)) @ amp
    return float(out) if x_arr.ndim == 0 else out


def duhamel_source_factor(t: float, mu: float) -> float:
    """``int_0^t exp(-s) exp(-mu (t - s)) ds`` in closed form."""
    if abs(mu - 1.0) < 1e-12:
        return t * math.exp(-t)
    return (math.exp(-t) - math.exp(-mu * t)) / (mu - 1.0)


def exact_inhomogeneous_final(
    t: float,
    x,
    alpha: float = EXPERIMENT2["alpha"],
    sigma: float = EXPERIMENT2["sigma"],
    k_max: int = DEFAULT_K_MAX,
):
    """Reference solution with initial data ``2x^2 - 4x^3/3`` and source ``e^{-t} cos(pi x)``."""
    mu = sigma * math.pi**alpha
    series = coefficients_experiment2(k_max, alpha, sigma)
    x_arr = np.asarray(x, dtype=float)
    return evaluate(series, t, x_arr) + np.cos(math.pi * x_arr) * duhamel_source_factor(t, mu)

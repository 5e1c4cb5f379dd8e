"""Grünwald–Letnikov weights ``g_k = (-1)^k binom(alpha, k)`` for alpha in (1, 2].

The weights are produced by the recurrence ``g_k = g_{k-1} (k - 1 - alpha) / k``;
gamma functions are never evaluated. Because ``g_1 = -alpha`` is the only
negative weight and the weights sum to zero, ``-sum(g_0..g_k)`` is the exact
remaining mass ``sum_{l>k} g_l`` and serves as the truncation criterion for
the infinite operator series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fradex._backend import kernels

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_TERMS = 10**10


@dataclass(frozen=True)
class FractionalOrder:
    """Differentiation order alpha, restricted to (1, 2]."""

    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not (1.0 < a <= 2.0):
            raise ValueError(f"fractional order must lie in (1, 2], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    def __float__(self) -> float:
        return self.alpha


def _as_alpha(alpha: float | FractionalOrder) -> float:
    if isinstance(alpha, FractionalOrder):
        return alpha.alpha
    return FractionalOrder(alpha).alpha


@dataclass(frozen=True)
class GlCoefficientStream:
    """Position in the weight sequence: ``g_current`` is ``g_k``.

    ``partial_sum`` holds ``g_0 + ... + g_k``. Instances are immutable;
    :func:`gl_next` returns a new one.
    """

    alpha: float
    k: int = 0
    g_current: float = 1.0
    partial_sum: float = 1.0

    @classmethod
    def start(cls, alpha: float | FractionalOrder) -> "GlCoefficientStream":
        return cls(alpha=_as_alpha(alpha))


def gl_next(stream: GlCoefficientStream) -> tuple[float, GlCoefficientStream]:
    """Advance to ``g_{k+1}`` and return it with the advanced stream."""
    k = stream.k + 1
    g = stream.g_current * ((k - 1) - stream.alpha) / k
    return g, GlCoefficientStream(stream.alpha, k, g, stream.partial_sum + g)


def tail_magnitude(stream: GlCoefficientStream) -> float:
    """Remaining mass ``sum_{l>k} g_l``; all of these terms are nonnegative."""
    if stream.k < 1:
        raise ValueError("tail magnitude is only meaningful once g_1 has been emitted")
    return -stream.partial_sum


def gl_coefficients(alpha: float | FractionalOrder, count: int) -> np.ndarray:
    """First ``count`` weights ``g_0 .. g_{count-1}`` as an array."""
    a = _as_alpha(alpha)
    if count <= 0:
        return np.zeros(0)
    k = np.arange(1, count, dtype=np.float64)
    return np.concatenate(([1.0], np.cumprod((k - 1.0 - a) / k)))


@dataclass(frozen=True)
class FoldedWeights:
    """GL weights summed by index modulo ``period``.

    ``weights[r]`` is ``sum g_l`` over ``l <= n_terms`` with ``l % period == r``;
    ``tail`` is the mass of everything after ``n_terms``.
    """

    alpha: float
    period: int
    weights: np.ndarray
    n_terms: int
    tail: float

    def with_tail_deposited(self) -> np.ndarray:
        """Weights with the remaining mass put where ``g_{n_terms+1}`` would land."""
        w = self.weights.copy()
        w[(self.n_terms + 1) % self.period] += self.tail
        return w


def fold_coefficients(
    alpha: float | FractionalOrder,
    period: int,
    tolerance: float = DEFAULT_TOLERANCE,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> FoldedWeights:
    """Run the weight stream until the exact tail falls below ``tolerance``."""
    a = _as_alpha(alpha)
    if period < 1:
        raise ValueError("period must be positive")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    w, n_terms, tail = kernels.fold_gl_weights(a, int(period), float(tolerance), int(max_terms))
    if tail >= tolerance:
        raise RuntimeError(
            f"GL series for alpha={a} not below tolerance {tolerance:g} after {n_terms} terms"
        )
    return FoldedWeights(a, int(period), np.asarray(w), int(n_terms), float(tail))

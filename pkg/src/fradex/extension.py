"""Index maps for the periodic even (Neumann) and odd (Dirichlet) extensions.

Grid data on the base window is extended to all of Z without materialising
anything: each map pulls an integer index back into the window. Both maps
accept Python ints or integer NumPy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NeumannIndexMap:
    """Even extension of ``v_0..v_N`` (``n_points = N + 1``), period ``2N + 2``.

    The mirror axes lie between indices -1 and 0 and between N and N+1,
    matching the cell-centred grid.
    """

    n_points: int

    def __post_init__(self) -> None:
        if self.n_points < 1:
            raise ValueError("n_points must be at least 1")

    @property
    def period(self) -> int:
        return 2 * self.n_points

    def __call__(self, j):
        return neumann_index(self, j)


@dataclass(frozen=True)
class DirichletIndexMap:
    """Odd extension of ``v_0..v_{N+1}`` with ``v_0 = v_{N+1} = 0``.

    ``n_points = N + 2`` counts both zero endpoints; the period is ``2N + 2``.
    """

    n_points: int

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2 (the two zero endpoints)")

    @property
    def period(self) -> int:
        return 2 * (self.n_points - 1)

    def __call__(self, j):
        return dirichlet_index(self, j)


def neumann_index(m: NeumannIndexMap, j):
    half = m.n_points
    r = np.mod(np.asarray(j) + half, m.period) - half
    out = np.where(r >= 0, r, -r - 1)
    return int(out) if out.ndim == 0 else out


def dirichlet_index(m: DirichletIndexMap, j):
    """Return ``(index, sign)``; sign is -1 on the reflected half-period."""
    edge = m.n_points - 1
    r = np.mod(np.asarray(j), m.period)
    flipped = r > edge
    idx = np.where(flipped, 2 * edge - r, r)
    sign = np.where(flipped, -1, 1)
    if idx.ndim == 0:
        return int(idx), int(sign)
    return idx, sign


def extend_sample(m: NeumannIndexMap | DirichletIndexMap, v, j):
    """Value of the extended vector at index ``j``."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] != m.n_points:
        raise ValueError(
            f"base vector has length {v.shape[0] if v.ndim else 0}, map expects {m.n_points}"
        )
    if isinstance(m, NeumannIndexMap):
        out = v[neumann_index(m, j)]
    else:
        idx, sign = dirichlet_index(m, j)
        out = sign * v[idx]
    return float(out) if np.ndim(out) == 0 else out

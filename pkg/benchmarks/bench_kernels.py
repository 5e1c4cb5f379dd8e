"""Compare the compiled kernels against their NumPy twins.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fradex import _pykernels
from fradex.operator import Grid, RieszParams, assemble_spectral

try:
    from fradex import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases():
    for alpha, tol in ((1.5, 1e-10), (1.2, 1e-10)):
        yield f"fold alpha={alpha} tol={tol:g}", lambda m, a=alpha, t=tol: m.fold_gl_weights(a, 128, t, 10**10)

    for n in (64, 256, 512):
        a = np.eye(n) - (1.0 / n) * assemble_spectral(RieszParams(1.2, 0.25), Grid(n)).a

        def lu(m, a=a, n=n):
            m.lu_factor_inplace(a.copy(), np.zeros(n, dtype=np.intp))

        yield f"LU factor n={n}", lu

        f = a.copy()
        piv = np.zeros(n, dtype=np.intp)
        _pykernels.lu_factor_inplace(f, piv)
        u0 = np.ascontiguousarray(np.ones((n, 2)))

        def march(m, f=f, piv=piv, u0=u0, n=n):
            m.implicit_euler_march(f, piv, u0, n)

        yield f"march n={n}, {n} steps, 2 columns", march


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _kernels is None:
        print("compiled kernels not built; timing the NumPy fallback only")
    print(f"{'kernel':40s} {'numpy [s]':>11s} {'cython [s]':>11s} {'speed-up':>9s}")
    for name, fn in cases():
        t_py = best_of(lambda: fn(_pykernels), args.repeat)
        if _kernels is None:
            print(f"{name:40s} {t_py:11.4f}")
            continue
        t_c = best_of(lambda: fn(_kernels), args.repeat)
        print(f"{name:40s} {t_py:11.4f} {t_c:11.4f} {t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()

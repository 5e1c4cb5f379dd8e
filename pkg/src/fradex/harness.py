"""Experiment orchestration: problem set-ups, convergence ladders, reports."""

from __future__ import annotations

import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from fradex import analytic
from fradex._csv import fmt, write_rows
from fradex.evolve import (
    Quadrature,
    SourceSpec,
    StepperConfig,
    boundary_flux,
    mass,
    solve_inhomogeneous_duhamel,
    step_homogeneous,
)
from fradex.gl_coeff import DEFAULT_TOLERANCE
from fradex.linalg import matrix_inf_norm, max_norm
from fradex.operator import (
    Grid,
    Method,
    OperatorMatrix,
    RieszParams,
    assemble,
    assemble_series,
    assemble_spectral,
    eigen_residual,
    eigensystem,
)

REFERENCE_LADDER = tuple(2**p for p in range(1, 10))  # h = 1/2 .. 1/512
FLUX_LADDER = tuple(2**p for p in range(3, 10))


@dataclass(frozen=True)
class Problem:
    """Initial data, optional separable source and exact solution for one set-up."""

    name: str
    alpha: float
    sigma: float
    initial: Callable[[np.ndarray], np.ndarray]
    exact: Callable[[float, np.ndarray], np.ndarray] | None
    source_time: Callable[[float], float] | None = None
    source_profile: Callable[[np.ndarray], np.ndarray] | None = None

    @property
    def params(self) -> RieszParams:
        return RieszParams(self.alpha, self.sigma)

    @property
    def has_source(self) -> bool:
        return self.source_time is not None


_MODE_RE = re.compile(r"^cosine_mode\((\d+)\)$")
_CONST_RE = re.compile(r"^constant\(([^)]+)\)$")


def make_problem(
    initial: str,
    alpha: float | None = None,
    sigma: float | None = None,
    source: str = "auto",
    samples: np.ndarray | None = None,
) -> Problem:
    """Build a :class:`Problem` from an initial-data selector.

    ``initial`` is one of ``experiment1``, ``experiment2``, ``cosine_mode(k)``,
    ``constant(c)`` or ``custom`` (``samples`` holds the node values; there is
    no exact solution then). ``source`` is ``auto`` (experiment2's source for
    experiment2, none otherwise), ``none`` or ``experiment2``.
    """
    key = initial.strip().replace(" ", "")
    defaults = analytic.EXPERIMENT2 if key == "experiment2" else analytic.EXPERIMENT1
    a = defaults["alpha"] if alpha is None else float(alpha)
    s = defaults["sigma"] if sigma is None else float(sigma)
    src = source.strip().lower()
    if src not in ("auto", "none", "experiment2"):
        raise ValueError(f"unknown source {source!r}")
    with_source = src == "experiment2" or (src == "auto" and key == "experiment2")

    if key == "experiment1":
        series = analytic.coefficients_experiment1(alpha=a, sigma=s)
        init, exact = analytic.initial_experiment1, lambda t, x: analytic.evaluate(series, t, x)
    elif key == "experiment2":
        series = analytic.coefficients_experiment2(alpha=a, sigma=s)
        init, exact = analytic.initial_experiment2, lambda t, x: analytic.evaluate(series, t, x)
    elif m := _MODE_RE.match(key):
        k = int(m.group(1))
        rate = s * (k * math.pi) ** a

        def init(x, k=k):
            return np.cos(k * math.pi * np.asarray(x, dtype=float))

        def exact(t, x, k=k, rate=rate):
            return math.exp(-rate * t) * np.cos(k * math.pi * np.asarray(x, dtype=float))

    elif m := _CONST_RE.match(key):
        c = float(m.group(1))

        def init(x, c=c):
            return np.full(np.shape(x), c)

        def exact(t, x, c=c):
            return np.full(np.shape(x), c)

    elif key == "custom":
        if samples is None:
            raise ValueError("custom initial data needs node samples")
        values = np.asarray(samples, dtype=float)

        def init(x, values=values):
            if np.shape(x) != values.shape:
                raise ValueError(
                    f"custom samples have {values.size} values, grid has {np.size(x)} nodes"
                )
            return values.copy()

        exact = None
    else:
        raise ValueError(f"unknown initial data {initial!r}")

    if not with_source:
        return Problem(key, a, s, init, exact)

    mu = s * math.pi**a
    if exact is not None:
        base_exact = exact

        def exact(t, x, base_exact=base_exact, mu=mu):
            x = np.asarray(x, dtype=float)
            return base_exact(t, x) + np.cos(math.pi * x) * analytic.duhamel_source_factor(t, mu)

    return Problem(
        key,
        a,
        s,
        init,
        exact,
        source_time=lambda t: math.exp(-t),
        source_profile=lambda x: np.cos(math.pi * np.asarray(x, dtype=float)),
    )


@dataclass(frozen=True)
class RunResult:
    n_points: int
    h: float
    tau: float
    final: np.ndarray
    error: float | None
    mass_drift: float | None  # max relative drift over the stored trajectory
    flux_left: float | None
    flux_right: float | None


def run_problem(
    problem: Problem,
    n_points: int,
    tau: float | None = None,
    t_final: float = 1.0,
    method: Method = "spectral",
    tolerance: float = DEFAULT_TOLERANCE,
    quadrature: Quadrature = "trapezoid",
    keep_trajectory: bool = False,
):
    """Solve one configuration; returns a :class:`RunResult` (and the trajectory if asked)."""
    grid = Grid(n_points)
    cfg = StepperConfig(grid.h if tau is None else tau, t_final)
    op = assemble(problem.params, grid, method, tolerance)
    u0 = problem.initial(grid.nodes)
    traj = None
    drift = None
    if problem.has_source:
        src = SourceSpec(problem.source_time, problem.source_profile(grid.nodes))
        final = solve_inhomogeneous_duhamel(op, u0, src, cfg, quadrature)
    else:
        traj = step_homogeneous(op, u0, cfg)
        final = traj.final
        drift = mass_drift(traj.states)
    error = None
    if problem.exact is not None:
        error = max_norm(final - problem.exact(t_final, grid.nodes))
    fl = fr = None
    if n_points >= 3:
        fl = boundary_flux(final, grid, "left")
        fr = boundary_flux(final, grid, "right")
    result = RunResult(n_points, grid.h, cfg.tau, final, error, drift, fl, fr)
    return (result, traj) if keep_trajectory else result


def mass_drift(states: np.ndarray) -> float:
    """``max_n |mass(u^n) - mass(u^0)|``, relative to ``|mass(u^0)|`` when that is nonzero."""
    m = np.array([mass(s) for s in states])
    drift = float(np.max(np.abs(m - m[0])))
    return drift / abs(m[0]) if m[0] != 0 else drift


def worker_count(jobs: int) -> int:
    cap = os.environ.get("FRADEX_THREADS", "").strip()
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, jobs))


def _map(fn, items):
    items = list(items)
    workers = worker_count(len(items))
    if workers == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def convergence_rates(errors: Sequence[float]) -> list[float | None]:
    """``log2(e_{2h} / e_h)`` between consecutive rows; ``None`` on the first."""
    rates: list[float | None] = [None]
    for coarse, fine in zip(errors[:-1], errors[1:]):
        rates.append(math.log2(coarse / fine))
    return rates


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    tau: float
    error: float
    rate: float | None


@dataclass(frozen=True)
class ConvergenceReport:
    label: str
    rows: tuple[ConvergenceRow, ...]
    runs: tuple[RunResult, ...] = ()

    @property
    def errors(self) -> list[float]:
        return [r.error for r in self.rows]

    @property
    def rates(self) -> list[float | None]:
        return [r.rate for r in self.rows]

    def to_csv(self, path_or_file) -> None:
        header = ["h", "tau", "max_norm_error", "rate"]
        rows = (
            [fmt(r.h), fmt(r.tau), fmt(r.error), "" if r.rate is None else fmt(r.rate)]
            for r in self.rows
        )
        write_rows(path_or_file, header, rows)

    def table(self) -> str:
        lines = [f"{self.label}", f"{'h':>10} {'tau':>12} {'error':>12} {'rate':>8}"]
        for r in self.rows:
            rate = "-" if r.rate is None else f"{r.rate:.4f}"
            lines.append(f"{'1/%d' % round(1 / r.h):>10} {r.tau:>12.6g} {r.error:>12.4e} {rate:>8}")
        return "\n".join(lines)


def run_convergence(
    problem: Problem,
    ladder: Sequence[int] = REFERENCE_LADDER,
    tau_protocol: str = "h",
    fixed_tau: float = 1.0 / 1024,
    t_final: float = 1.0,
    method: Method = "spectral",
    tolerance: float = DEFAULT_TOLERANCE,
    quadrature: Quadrature = "trapezoid",
) -> ConvergenceReport:
    """Max-norm errors at ``t_final`` along a ladder of grids.

    ``tau_protocol="h"`` refines time with space (tau = h); ``"fixed"``
    keeps ``tau = fixed_tau`` on every rung.
    """
    if problem.exact is None:
        raise ValueError(f"problem {problem.name!r} has no exact solution to measure against")
    if tau_protocol not in ("h", "fixed"):
        raise ValueError(f"unknown tau protocol {tau_protocol!r}")
    ladder = sorted(int(n) for n in ladder)

    def rung(n: int) -> RunResult:
        tau = 1.0 / n if tau_protocol == "h" else fixed_tau
        return run_problem(problem, n, tau, t_final, method, tolerance, quadrature)

    runs = _map(rung, ladder)
    rates = convergence_rates([r.error for r in runs])
    rows = tuple(ConvergenceRow(r.h, r.tau, r.error, q) for r, q in zip(runs, rates))
    label = f"{problem.name} alpha={problem.alpha:g} sigma={problem.sigma:g} tau={tau_protocol}"
    return ConvergenceReport(label, rows, tuple(runs))


def flux_ladder(
    problem: Problem,
    ladder: Sequence[int] = FLUX_LADDER,
    t_final: float = 1.0,
    method: Method = "spectral",
    tolerance: float = DEFAULT_TOLERANCE,
    quadrature: Quadrature = "trapezoid",
) -> list[tuple[int, float]]:
    """``(n_points, |left-wall derivative estimate|)`` at ``t_final`` with tau = h."""
    ladder = sorted(int(n) for n in ladder)

    def rung(n: int) -> tuple[int, float]:
        r = run_problem(problem, n, 1.0 / n, t_final, method, tolerance, quadrature)
        return n, abs(r.flux_left)

    return _map(rung, ladder)


def write_flux_csv(rows, path_or_file) -> None:
    write_rows(path_or_file, ["n_points", "abs_flux"], ([str(n), fmt(f)] for n, f in rows))


def write_matrix_csv(a: np.ndarray, path_or_file) -> None:
    """Row-major, no header."""
    write_rows(path_or_file, None, ([fmt(v) for v in row] for row in a))


def write_eigenvalue_csv(lam: np.ndarray, path_or_file) -> None:
    write_rows(path_or_file, ["k", "eigenvalue"], ([str(k), fmt(v)] for k, v in enumerate(lam)))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    bound: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (bound {self.bound:.3e})"


def operator_checks(
    op: OperatorMatrix,
    reference: OperatorMatrix | None = None,
) -> list[Check]:
    """Structural checks on an assembled operator.

    Sign pattern, row and column sums, centro-symmetry, eigen residuals and,
    when ``reference`` is given, the entrywise gap to the other construction.
    """
    a = op.a
    n = a.shape[0]
    scale = op.scale
    checks: list[Check] = []
    bound = op.defect_bound()
    slack = bound if op.method == "series" else 1e-12 * matrix_inf_norm(a)

    diag = np.diag(a)
    worst_diag = float(np.max(diag)) if n > 1 else -1.0
    checks.append(Check("diagonal < 0", n == 1 or worst_diag < 0, worst_diag, 0.0))
    off = a[~np.eye(n, dtype=bool)]
    worst_off = float(np.min(off)) if off.size else 0.0
    checks.append(Check("off-diagonal >= 0", worst_off >= -slack, worst_off, -slack))

    rs = float(np.max(np.abs(op.row_sums())))
    cs = float(np.max(np.abs(op.column_sums())))
    checks.append(Check("|row sums|", rs <= bound, rs, bound))
    checks.append(Check("|column sums|", cs <= bound, cs, bound))

    centro = float(np.max(np.abs(a - a[::-1, ::-1])))
    centro_bound = 1e-12 * float(np.max(np.abs(a))) if n > 1 else 0.0
    checks.append(Check("centro-symmetry", centro <= centro_bound, centro, centro_bound))

    es = eigensystem(op.params, op.grid)
    norm = matrix_inf_norm(a)
    resid = max(eigen_residual(op, es, k) for k in range(n))
    rel = resid / norm if norm else resid
    checks.append(Check("eigen residual (relative)", rel <= 1e-8, rel, 1e-8))

    if reference is not None:
        gap = matrix_inf_norm(a - reference.a)
        tol = op.series_tolerance or reference.series_tolerance
        gap_bound = 4.0 * scale * tol
        checks.append(Check("||A_series - A_spectral||_inf", gap <= gap_bound, gap, gap_bound))
    return checks


def matrix_report(
    params: RieszParams,
    grid: Grid,
    method: Method = "spectral",
    tolerance: float = DEFAULT_TOLERANCE,
) -> tuple[OperatorMatrix, list[Check]]:
    """Assemble with ``method`` and check it, cross-referencing the other route."""
    if method == "series":
        op = assemble_series(params, grid, tolerance)
        other = assemble_spectral(params, grid)
    else:
        op = assemble_spectral(params, grid)
        other = assemble_series(params, grid, tolerance)
    return op, operator_checks(op, other)

"""``fradex`` command line: solve | convergence | matrix | flux.

Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from fradex._backend import BACKEND
from fradex.config import ConfigError, RunConfig, load_config
from fradex.evolve import (
    NonFiniteStateError,
    SourceSpec,
    StepperConfig,
    Trajectory,
    boundary_flux,
    mass,
    solve_inhomogeneous_duhamel,
    step_homogeneous,
)
from fradex.harness import (
    FLUX_LADDER,
    REFERENCE_LADDER,
    flux_ladder,
    make_problem,
    mass_drift,
    matrix_report,
    run_convergence,
    write_eigenvalue_csv,
    write_flux_csv,
    write_matrix_csv,
)
from fradex.linalg import SingularMatrixError, max_norm
from fradex.operator import Grid, RieszParams, assemble, eigenvalues

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="key = value configuration file")
    p.add_argument("--alpha", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--n", type=int, help="grid points (h = 1/n)")
    p.add_argument("--tau", type=float)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--method", choices=("series", "spectral"))
    p.add_argument("--tol", type=float, help="series truncation tolerance")
    p.add_argument("--initial", help="experiment1 | experiment2 | cosine_mode(k) | constant(c) | custom")
    p.add_argument("--source", choices=("auto", "none", "experiment2"))
    p.add_argument("--samples", metavar="PATH", help="node values for --initial custom")
    p.add_argument("--quadrature", choices=("trapezoid", "implicit"), help="Duhamel recombination rule")
    p.add_argument("--out", metavar="PATH", help="CSV output (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fradex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run one configuration, write the trajectory")
    _common(p)

    p = sub.add_parser("convergence", help="error/rate table along a grid ladder")
    _common(p)
    p.add_argument("--ladder", help="comma-separated grid sizes, e.g. 2,4,8")
    p.add_argument("--tau-protocol", dest="tau_protocol", choices=("h", "fixed"))
    p.add_argument("--fixed-tau", dest="fixed_tau", type=float)

    p = sub.add_parser("matrix", help="dump A, its eigenvalues and a property report")
    _common(p)
    p.add_argument("--eigen-out", dest="eigen_out", metavar="PATH")

    p = sub.add_parser("flux", help="left-wall derivative estimate along a grid ladder")
    _common(p)
    p.add_argument("--ladder", help="comma-separated grid sizes (default 8,...,512)")
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "config") and v is not None
    }
    if isinstance(overrides.get("ladder"), str):
        try:
            overrides["ladder"] = tuple(int(s) for s in overrides["ladder"].split(",") if s.strip())
        except ValueError:
            raise ConfigError(f"bad ladder {overrides['ladder']!r}", key="ladder") from None
    return cfg.with_overrides(**overrides).validate()


def _problem(cfg: RunConfig, single_grid: bool = True):
    samples = None
    if cfg.initial.replace(" ", "") == "custom":
        if not single_grid:
            raise ConfigError("custom samples fix one grid; they cannot drive a ladder", key="initial")
        try:
            samples = np.loadtxt(cfg.samples, delimiter=",", ndmin=1).ravel()
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read samples file {cfg.samples}: {exc}", key="samples") from None
        if samples.size != cfg.n:
            raise ConfigError(f"{samples.size} samples given for a grid of {cfg.n} points", key="samples")
    try:
        return make_problem(cfg.initial, cfg.alpha, cfg.sigma, cfg.source, samples)
    except ValueError as exc:
        raise ConfigError(str(exc), key="initial") from None


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, sys.stderr, False
    return open(path, "w", newline=""), sys.stdout, True


def cmd_solve(cfg: RunConfig) -> int:
    problem = _problem(cfg)
    grid = Grid(cfg.n)
    step = StepperConfig(cfg.step, cfg.t_final)
    op = assemble(problem.params, grid, cfg.method, cfg.tol)
    u0 = problem.initial(grid.nodes)
    if problem.has_source:
        src = SourceSpec(problem.source_time, problem.source_profile(grid.nodes))
        final = solve_inhomogeneous_duhamel(op, u0, src, step, cfg.quadrature)
        traj = Trajectory(np.array([0.0, cfg.t_final]), np.vstack([u0, final]), grid)
    else:
        traj = step_homogeneous(op, u0, step)
        final = traj.final
    sink, log, close = _open_out(cfg.out)
    try:
        traj.to_csv(sink)
    finally:
        if close:
            sink.close()
    print(f"problem {problem.name}: alpha={problem.alpha:g} sigma={problem.sigma:g} "
          f"n={grid.n_points} h={grid.h:.6g} tau={step.tau:.6g} steps={step.n_steps} "
          f"method={cfg.method} backend={BACKEND}", file=log)
    print(f"final mass {mass(final):.16e}  relative mass drift {mass_drift(traj.states):.3e}", file=log)
    if grid.n_points >= 3:
        print(f"boundary flux left {boundary_flux(final, grid, 'left'):.6e}  "
              f"right {boundary_flux(final, grid, 'right'):.6e}", file=log)
    if problem.exact is not None:
        err = max_norm(final - problem.exact(cfg.t_final, grid.nodes))
        print(f"max-norm error vs exact solution {err:.6e}", file=log)
    return EXIT_OK


def cmd_convergence(cfg: RunConfig) -> int:
    problem = _problem(cfg, single_grid=False)
    if problem.exact is None:
        raise ConfigError("convergence needs initial data with a known exact solution", key="initial")
    report = run_convergence(
        problem,
        cfg.ladder or REFERENCE_LADDER,
        cfg.tau_protocol,
        cfg.fixed_tau,
        cfg.t_final,
        cfg.method,
        cfg.tol,
        cfg.quadrature,
    )
    sink, log, close = _open_out(cfg.out)
    try:
        report.to_csv(sink)
    finally:
        if close:
            sink.close()
    print(report.table(), file=log)
    return EXIT_OK


def cmd_matrix(cfg: RunConfig) -> int:
    problem_defaults = make_problem(cfg.initial if cfg.initial != "custom" else "experiment1",
                                    cfg.alpha, cfg.sigma, "none")
    params = RieszParams(problem_defaults.alpha, problem_defaults.sigma)
    grid = Grid(cfg.n)
    op, checks = matrix_report(params, grid, cfg.method, cfg.tol)
    lam = eigenvalues(params, grid)
    sink, log, close = _open_out(cfg.out)
    try:
        write_matrix_csv(op.a, sink)
    finally:
        if close:
            sink.close()
    eigen_out = cfg.eigen_out
    if eigen_out is None and cfg.out is not None:
        out = Path(cfg.out)
        eigen_out = str(out.with_name(out.stem + "_eigenvalues.csv"))
    if eigen_out is not None:
        write_eigenvalue_csv(lam, eigen_out)
    print(f"A(alpha={params.alpha:g}, sigma={params.sigma:g}) n={grid.n_points} method={op.method}",
          file=log)
    for c in checks:
        print(c.line(), file=log)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERIC


def cmd_flux(cfg: RunConfig) -> int:
    problem = _problem(cfg, single_grid=False)
    rows = flux_ladder(problem, cfg.ladder or FLUX_LADDER, cfg.t_final, cfg.method, cfg.tol, cfg.quadrature)
    sink, log, close = _open_out(cfg.out)
    try:
        write_flux_csv(rows, sink)
    finally:
        if close:
            sink.close()
    for n, f in rows:
        print(f"n={n:5d}  |d_x u(t_final, 0)| ~ {f:.6e}", file=log)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "convergence": cmd_convergence,
    "matrix": cmd_matrix,
    "flux": cmd_flux,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        cfg = _resolve_config(args)
        with np.errstate(over="ignore", invalid="ignore"):
            return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"fradex: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fradex: I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularMatrixError, NonFiniteStateError, RuntimeError, ValueError) as exc:
        print(f"fradex: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

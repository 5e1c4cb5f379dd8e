from __future__ import annotations

import io
import math

import numpy as np
import pytest

from fradex.harness import (
    convergence_rates,
    flux_ladder,
    make_problem,
    matrix_report,
    run_convergence,
    run_problem,
    worker_count,
)
from fradex.operator import Grid, RieszParams, eigenvalues


def test_rate_formula_by_hand():
    rates = convergence_rates([0.4, 0.1, 0.05])
    assert rates[0] is None
    assert rates[1] == pytest.approx(2.0)
    assert rates[2] == pytest.approx(1.0)


def test_experiment1_coarse_error():
    r = run_problem(make_problem("experiment1"), 8, 1 / 8)
    assert r.error == pytest.approx(1.2e-2, rel=0.15)


def test_constant_initial_data():
    r = run_problem(make_problem("constant(2.5)"), 16, 1 / 16)
    assert r.mass_drift < 1e-13
    assert abs(r.flux_left) < 1e-12 and abs(r.flux_right) < 1e-12
    assert r.error < 1e-12
    assert [f for _, f in flux_ladder(make_problem("constant(1)"), (8, 16))] == [
        pytest.approx(0.0, abs=1e-12)
    ] * 2


def test_cosine_mode_one_step():
    p = make_problem("cosine_mode(2)", alpha=1.5, sigma=1.0)
    grid = Grid(16)
    tau = 0.1
    r = run_problem(p, 16, tau, tau)
    lam = eigenvalues(RieszParams(1.5, 1.0), grid)[2]
    expected = np.cos(2 * math.pi * grid.nodes) / (1 - tau * lam)
    assert np.max(np.abs(r.final - expected)) < 1e-12


def test_alpha_two_rate_tends_to_one():
    report = run_convergence(make_problem("cosine_mode(1)", alpha=2.0, sigma=1.0), (64, 128, 256))
    assert report.rates[-1] == pytest.approx(1.0, abs=0.1)


def test_custom_needs_samples():
    with pytest.raises(ValueError):
        make_problem("custom")
    with pytest.raises(ValueError):
        make_problem("gaussian")
    with pytest.raises(ValueError):
        make_problem("experiment1", source="wind")
    p = make_problem("custom", samples=np.ones(4))
    assert p.exact is None
    with pytest.raises(ValueError):
        run_convergence(p, (4,))


def test_report_csv_and_table():
    report = run_convergence(make_problem("experiment1"), (4, 8))
    buf = io.StringIO()
    report.to_csv(buf)
    lines = buf.getvalue().split("\n")
    assert lines[0] == "h,tau,max_norm_error,rate"
    assert lines[1].endswith(",")  # no rate on the first rung
    assert "1/8" in report.table()


def test_worker_count(monkeypatch):
    monkeypatch.setenv("FRADEX_THREADS", "1")
    assert worker_count(10) == 1
    monkeypatch.setenv("FRADEX_THREADS", "4")
    assert worker_count(2) == 2


def test_threads_do_not_change_results(monkeypatch):
    p = make_problem("experiment1")
    monkeypatch.setenv("FRADEX_THREADS", "1")
    serial = run_convergence(p, (4, 8, 16)).errors
    monkeypatch.setenv("FRADEX_THREADS", "3")
    assert run_convergence(p, (4, 8, 16)).errors == serial


def test_matrix_report_all_pass():
    _, checks = matrix_report(RieszParams(1.2, 0.25), Grid(8), "spectral", 1e-10)
    assert all(c.passed for c in checks), [c.line() for c in checks]
    _, checks = matrix_report(RieszParams(1.7, 1.0), Grid(8), "series", 1e-10)
    assert all(c.passed for c in checks), [c.line() for c in checks]


from __future__ import annotations

import pytest

from fradex.config import ConfigError, RunConfig, load_config, parse_config_text


def test_parse_full_file():
    cfg = parse_config_text(
        """
        # experiment 2 on a fine grid
        alpha = 1.6
        sigma = 0.5   # diffusivity
        n = 128
        tau = 0.0078125
        initial = experiment2
        method = series
        tol = 1e-9
        ladder = 4, 8, 16
        quadrature = implicit
        """
    ).validate()
    assert cfg.alpha == 1.6 and cfg.sigma == 0.5 and cfg.n == 128
    assert cfg.step == 1 / 128
    assert cfg.ladder == (4, 8, 16)
    assert cfg.method == "series" and cfg.quadrature == "implicit"


def test_defaults():
    cfg = RunConfig().validate()
    assert cfg.step == cfg.h == 1 / 64
    assert cfg.alpha is None and cfg.ladder is None


def test_aliases():
    cfg = parse_config_text("n_points = 8\nseries_tolerance = 1e-6\n")
    assert cfg.n == 8 and cfg.tol == 1e-6


@pytest.mark.parametrize(
    "text,line,key",
    [
        ("alpha = 1.5\nn = eight\n", 2, "n"),
        ("colour = blue\n", 1, "colour"),
        ("\n\nalpha 1.5\n", 3, None),
        ("ladder = ,\n", 1, "ladder"),
    ],
)
def test_parse_errors_carry_location(text, line, key):
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert exc.value.line == line
    assert exc.value.key == key
    assert f"line {line}" in str(exc.value)


@pytest.mark.parametrize(
    "overrides,key",
    [
        ({"alpha": 1.0}, "alpha"),
        ({"alpha": 2.5}, "alpha"),
        ({"sigma": 0.0}, "sigma"),
        ({"n": 0}, "n"),
        ({"tau": 0.3}, "tau"),
        ({"tau": -0.1}, "tau"),
        ({"t_final": 0.0}, "t_final"),
        ({"method": "fourier"}, "method"),
        ({"tol": 0.0}, "tol"),
        ({"ladder": (4, 0)}, "ladder"),
        ({"tau_protocol": "weird"}, "tau_protocol"),
        ({"quadrature": "simpson"}, "quadrature"),
        ({"initial": "gaussian"}, "initial"),
        ({"initial": "custom"}, "samples"),
        ({"source": "wind"}, "source"),
    ],
)
def test_validation(overrides, key):
    with pytest.raises(ConfigError) as exc:
        RunConfig().with_overrides(**overrides).validate()
    assert exc.value.key == key


def test_overrides_skip_none():
    cfg = RunConfig(alpha=1.3).with_overrides(alpha=None, sigma=2.0)
    assert cfg.alpha == 1.3 and cfg.sigma == 2.0


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.cfg")

"""Flat ``key = value`` run configuration with command-line overrides."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from fradex.harness import _CONST_RE, _MODE_RE


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _ladder(text: str) -> tuple[int, ...]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ValueError("empty ladder")
    return tuple(int(p) for p in parts)


def _optional_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


_ALIASES = {"n_points": "n", "series_tolerance": "tol", "t-final": "t_final"}

_PARSERS = {
    "alpha": _optional_float,
    "sigma": _optional_float,
    "n": int,
    "tau": _optional_float,
    "t_final": float,
    "initial": str.strip,
    "source": str.strip,
    "samples": str.strip,
    "method": str.strip,
    "tol": float,
    "ladder": _ladder,
    "tau_protocol": str.strip,
    "fixed_tau": float,
    "quadrature": str.strip,
    "out": str.strip,
    "eigen_out": str.strip,
}


@dataclass(frozen=True)
class RunConfig:
    alpha: float | None = None  # None: the initial-data preset's value
    sigma: float | None = None
    n: int = 64  # grid points, h = 1/n
    tau: float | None = None  # None: tau = h
    t_final: float = 1.0
    initial: str = "experiment1"
    source: str = "auto"
    samples: str | None = None  # file of node values for initial = custom
    method: str = "spectral"
    tol: float = 1e-10
    ladder: tuple[int, ...] | None = None  # None: the subcommand's default ladder
    tau_protocol: str = "h"
    fixed_tau: float = 1.0 / 1024
    quadrature: str = "trapezoid"
    out: str | None = None
    eigen_out: str | None = None

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def step(self) -> float:
        return self.h if self.tau is None else self.tau

    def with_overrides(self, **overrides) -> "RunConfig":
        given = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **given)

    def validate(self) -> "RunConfig":
        if self.alpha is not None and not (1.0 < self.alpha <= 2.0):
            raise ConfigError(f"alpha must lie in (1, 2], got {self.alpha}", key="alpha")
        if self.sigma is not None and not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigError(f"sigma must be positive, got {self.sigma}", key="sigma")
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}", key="n")
        if not (self.t_final > 0 and math.isfinite(self.t_final)):
            raise ConfigError(f"t_final must be positive, got {self.t_final}", key="t_final")
        for key, tau in (("tau", self.step), ("fixed_tau", self.fixed_tau)):
            if not tau > 0:
                raise ConfigError(f"time step must be positive, got {tau}", key=key)
        steps = round(self.t_final / self.step)
        if steps < 1 or abs(steps * self.step - self.t_final) > 1e-12 * max(1.0, self.t_final):
            raise ConfigError(f"tau = {self.step} does not divide t_final = {self.t_final}", key="tau")
        if self.method not in ("series", "spectral"):
            raise ConfigError(f"method must be series or spectral, got {self.method!r}", key="method")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}", key="tol")
        if self.ladder is not None and (not self.ladder or any(n < 1 for n in self.ladder)):
            raise ConfigError("ladder entries must be positive grid sizes", key="ladder")
        if self.tau_protocol not in ("h", "fixed"):
            raise ConfigError(f"tau_protocol must be h or fixed, got {self.tau_protocol!r}", key="tau_protocol")
        if self.quadrature not in ("trapezoid", "implicit"):
            raise ConfigError(
                f"quadrature must be trapezoid or implicit, got {self.quadrature!r}", key="quadrature"
            )
        if self.source.lower() not in ("auto", "none", "experiment2"):
            raise ConfigError(f"unknown source {self.source!r}", key="source")
        key = self.initial.replace(" ", "")
        known = key in ("experiment1", "experiment2", "custom") or _MODE_RE.match(key) or _CONST_RE.match(key)
        if not known:
            raise ConfigError(f"unknown initial data {self.initial!r}", key="initial")
        if key == "custom" and not self.samples:
            raise ConfigError("initial = custom needs a samples file", key="samples")
        return self


_FIELD_NAMES = {f.name for f in fields(RunConfig)}


def parse_config_text(text: str) -> RunConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in _FIELD_NAMES:
            raise ConfigError("unknown key", line=lineno, key=key)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value {value!r} ({exc})", line=lineno, key=key) from None
    return RunConfig(**values)


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    return parse_config_text(text)

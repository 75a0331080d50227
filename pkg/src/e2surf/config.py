"""Run configuration: JSON file plus command-line overrides."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .errors import ConfigError
from .numerics import DEFAULT_ODE_TOL, DEFAULT_QUAD_TOL, DEFAULT_ROOT_TOL

FAMILIES = ("helicoid", "catenoid")


@dataclass
class GridSpec:
    """Parameter rectangle and sample counts; ``None`` bounds mean one period."""

    u_min: Optional[float] = None
    u_max: Optional[float] = None
    v_min: Optional[float] = None
    v_max: Optional[float] = None
    nu: int = 41
    nv: int = 41


@dataclass
class Tolerances:
    ode: float = DEFAULT_ODE_TOL
    quad: float = DEFAULT_QUAD_TOL
    root: float = DEFAULT_ROOT_TOL


@dataclass
class Outputs:
    mesh: Optional[str] = None
    csv: Optional[str] = None
    report: Optional[str] = None


@dataclass
class RunConfig:
    family: str = "helicoid"
    lambda1: float = 1.0
    lambda2: float = 1.0
    K: Optional[float] = None
    c: Optional[float] = None
    theta: Optional[float] = None
    grid: GridSpec = field(default_factory=GridSpec)
    tol: Tolerances = field(default_factory=Tolerances)
    outputs: Outputs = field(default_factory=Outputs)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


# flat override keys -> (section, attribute)
_SECTIONS = {
    "u_min": "grid", "u_max": "grid", "v_min": "grid", "v_max": "grid", "nu": "grid", "nv": "grid",
    "ode_tol": "tol", "quad_tol": "tol", "root_tol": "tol",
    "mesh": "outputs", "csv": "outputs", "report": "outputs",
}


def _merge(cfg: RunConfig, data: Mapping[str, Any], origin: str):
    for key, value in data.items():
        if value is None:
            continue
        if key in ("grid", "tol", "outputs"):
            if not isinstance(value, Mapping):
                raise ConfigError(key, f"expected an object in {origin}")
            section = getattr(cfg, key)
            for sub, subval in value.items():
                if not hasattr(section, sub):
                    raise ConfigError(f"{key}.{sub}", f"unknown field in {origin}")
                setattr(section, sub, subval)
        elif key in _SECTIONS:
            section = getattr(cfg, _SECTIONS[key])
            setattr(section, key.removesuffix("_tol"), value)
        elif hasattr(cfg, key):
            setattr(cfg, key, value)
        else:
            raise ConfigError(key, f"unknown field in {origin}")


def _number(name, value, *, positive=False, integer=False):
    try:
        x = int(value) if integer else float(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected a number, got {value!r}") from None
    if integer and x != value:
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if not math.isfinite(x):
        raise ConfigError(name, "must be finite")
    if positive and not x > 0:
        raise ConfigError(name, f"must be positive, got {value!r}")
    return x


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.family not in FAMILIES:
        raise ConfigError("family", f"must be one of {FAMILIES}, got {cfg.family!r}")
    cfg.lambda1 = _number("lambda1", cfg.lambda1, positive=True)
    cfg.lambda2 = _number("lambda2", cfg.lambda2, positive=True)
    if cfg.lambda1 < cfg.lambda2:
        raise ConfigError("lambda1", f"must be >= lambda2 ({cfg.lambda1} < {cfg.lambda2})")
    if cfg.family == "helicoid":
        if cfg.K is None:
            raise ConfigError("K", "required for the helicoid family")
        cfg.K = _number("K", cfg.K)
        if cfg.K == 0 or abs(cfg.K) >= 1 - 1e-6:
            raise ConfigError("K", f"must satisfy 0 < |K| < 1 - 1e-6, got {cfg.K}")
        if cfg.c is not None or cfg.theta is not None:
            raise ConfigError("family", "c/theta given for the helicoid family")
    else:
        if cfg.c is None:
            raise ConfigError("c", "required for the catenoid family")
        cfg.c = _number("c", cfg.c, positive=True)
        if cfg.theta is not None:
            cfg.theta = _number("theta", cfg.theta)
        if cfg.K is not None:
            raise ConfigError("family", "K given for the catenoid family")
    g = cfg.grid
    for name in ("nu", "nv"):
        n = _number(f"grid.{name}", getattr(g, name), integer=True)
        if n < 2:
            raise ConfigError(f"grid.{name}", f"must be at least 2, got {n}")
        setattr(g, name, n)
    for name in ("u_min", "u_max", "v_min", "v_max"):
        if getattr(g, name) is not None:
            setattr(g, name, _number(f"grid.{name}", getattr(g, name)))
    for name in ("ode", "quad", "root"):
        setattr(cfg.tol, name, _number(f"tol.{name}", getattr(cfg.tol, name), positive=True))
    return cfg


def parse_config(path=None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Build a validated RunConfig; ``overrides`` (flat or nested keys) win over the file."""
    cfg = RunConfig()
    if path is not None:
        try:
            with open(os.fspath(path), encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise ConfigError("config", f"no such file: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
        _merge(cfg, data, str(path))
    if overrides:
        _merge(cfg, overrides, "flags")
        # choosing a parameter on the command line implies its family
        if "family" not in overrides or overrides["family"] is None:
            if overrides.get("K") is not None:
                cfg.family = "helicoid"
            elif overrides.get("c") is not None:
                cfg.family = "catenoid"
    return validate(cfg)


def parse_metric(path=None, overrides: Optional[Mapping[str, Any]] = None):
    """Only the metric parameters, for commands that take no family."""
    from .group import MetricParams

    values = {"lambda1": 1.0, "lambda2": 1.0}
    if path is not None:
        try:
            with open(os.fspath(path), encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from None
        values.update({k: data[k] for k in values if k in data})
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    l1 = _number("lambda1", values["lambda1"], positive=True)
    l2 = _number("lambda2", values["lambda2"], positive=True)
    if l1 < l2:
        raise ConfigError("lambda1", f"must be >= lambda2 ({l1} < {l2})")
    return MetricParams(l1, l2)

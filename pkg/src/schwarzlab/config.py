"""Run configuration: YAML file plus command-line overrides."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import yaml

from .integrators import IntegratorConfig

SCHEMA_VERSION = 1
MODES = ("schwarz", "lagrange", "hamilton", "geodesic")
SEED_KINDS = ("exact", "line", "tan", "exp", "state")
STATE_LEN = {"schwarz": 3, "lagrange": 4, "hamilton": 4, "geodesic": 8}


class ConfigError(ValueError):
    pass


@dataclass
class SeedSpec:
    """Initial data.

    ``exact``: m o phi_lambda with ``mobius = [a, b, c, d]``;
    ``line``/``tan``/``exp``: rho = t, tan t, exp(2t);
    ``state``: raw initial state in the layout of the selected mode.
    """

    kind: str = "exact"
    mobius: tuple = (1.0, 0.0, 0.0, 1.0)
    t0: float = 0.0
    state: Optional[tuple] = None


@dataclass
class RunConfig:
    mode: str = "schwarz"
    lam: float = 0.0
    nu: float = 0.0
    seed: SeedSpec = field(default_factory=SeedSpec)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    out: Optional[str] = None
    schema_version: int = SCHEMA_VERSION

    def validate(self) -> "RunConfig":
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.seed.kind not in SEED_KINDS:
            raise ConfigError(f"seed kind must be one of {SEED_KINDS}, got {self.seed.kind!r}")
        if self.seed.kind == "state":
            n = STATE_LEN[self.mode]
            if self.seed.state is None or len(self.seed.state) != n:
                raise ConfigError(f"seed.state for mode {self.mode} needs {n} numbers")
        if len(self.seed.mobius) != 4:
            raise ConfigError("seed.mobius needs 4 entries [a, b, c, d]")
        a, b, c, d = self.seed.mobius
        if a * d - b * c == 0:
            raise ConfigError("seed.mobius is singular")
        if self.integrator.t_end <= self.seed.t0:
            raise ConfigError("integrator.t_end must exceed seed.t0")
        return self

    def echo(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "mode": self.mode,
            "lambda": self.lam,
            "nu": self.nu,
            "seed": {
                "kind": self.seed.kind,
                "mobius": list(self.seed.mobius),
                "t0": self.seed.t0,
                "state": None if self.seed.state is None else list(self.seed.state),
            },
            "integrator": {
                "method": self.integrator.method,
                "step": self.integrator.h,
                "t_end": self.integrator.t_end,
                "atol": self.integrator.atol,
                "rtol": self.integrator.rtol,
                "max_steps": self.integrator.max_steps,
            },
        }


_TOP = {"schema_version", "mode", "lambda", "nu", "seed", "integrator", "output"}


def _floats(seq, what):
    try:
        return tuple(float(v) for v in seq)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must be a list of numbers") from exc


def from_mapping(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    unknown = set(data) - _TOP
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    seed = data.get("seed") or {}
    integ = data.get("integrator") or {}
    output = data.get("output") or {}
    try:
        return RunConfig(
            mode=str(data.get("mode", "schwarz")),
            lam=float(data.get("lambda", 0.0)),
            nu=float(data.get("nu", 0.0)),
            seed=SeedSpec(
                kind=str(seed.get("kind", "exact")),
                mobius=_floats(seed.get("mobius", (1, 0, 0, 1)), "seed.mobius"),
                t0=float(seed.get("t0", 0.0)),
                state=None if seed.get("state") is None else _floats(seed["state"], "seed.state"),
            ),
            integrator=IntegratorConfig(
                method=str(integ.get("method", "rk4")),
                h=float(integ.get("step", 1e-3)),
                t_end=float(integ.get("t_end", 1.0)),
                atol=float(integ.get("atol", 1e-12)),
                rtol=float(integ.get("rtol", 1e-12)),
                max_steps=int(integ.get("max_steps", 1_000_000)),
            ),
            out=output.get("csv"),
            schema_version=int(data.get("schema_version", SCHEMA_VERSION)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load(path: Optional[str], overrides: dict) -> RunConfig:
    """Read ``path`` (if given), apply non-None overrides, validate."""
    data: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}") from exc
    data = dict(data)
    for key, value in overrides.items():
        if value is None:
            continue
        if key in ("mode", "lambda", "nu"):
            data[key] = value
        elif key == "seed":
            data["seed"] = {**(data.get("seed") or {}), "kind": value}
        elif key in ("t_end", "step"):
            data["integrator"] = {**(data.get("integrator") or {}), key: value}
        elif key == "out":
            data["output"] = {**(data.get("output") or {}), "csv": value}
        else:
            raise ConfigError(f"unknown override {key}")
    return from_mapping(data).validate()

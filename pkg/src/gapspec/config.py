"""Run configuration: a flat ``key = value`` text format with ``#`` comments."""
from __future__ import annotations

import dataclasses
import os
import typing
from dataclasses import dataclass, fields

from .errors import ConfigError
from .medium import MediumParams

FORMATS = ("csv", "json")
THREADS_ENV = "GAPSPEC_THREADS"


@dataclass
class RunConfig:
    # medium, in input units
    omega_perp: float = 1.0
    omega_par: float = 1.2
    omega12: float = 1.1
    beta: float = 1e-3
    L: typing.Optional[float] = None
    omega12_shifted: typing.Optional[float] = None
    edge_tol_rel: float = 1e-6
    # subcommand arguments
    l: int = 1
    N: int = 1
    H: float = 0.0
    mode: str = "linear"
    branch: str = "lower"
    mode_index: int = 0
    h_min: float = 0.0
    h_max: float = 1e-4
    h_points: int = 11
    omega_min: typing.Optional[float] = None
    omega_max: typing.Optional[float] = None
    omega_points: int = 101
    # output
    format: str = "csv"
    output: str = "-"
    # numerics
    newton_tol: float = 1e-12
    threads: int = 1

    def validate(self):
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}", key="format")
        if self.mode not in ("linear", "corrected", "exact"):
            raise ConfigError(f"unknown mode {self.mode!r}", key="mode")
        if self.branch not in ("lower", "upper"):
            raise ConfigError(f"unknown branch {self.branch!r}", key="branch")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1", key="threads")
        if self.h_points < 1 or self.omega_points < 2:
            raise ConfigError("grids need at least one point (two for omega)", key="h_points")
        return self

    def medium_params(self) -> MediumParams:
        """Medium in input units; raises ``DomainError`` on inconsistent values."""
        return MediumParams(self.omega_perp, self.omega_par, self.omega12, self.beta, self.L,
                            self.omega12_shifted, self.edge_tol_rel)

    @property
    def scale(self) -> float:
        return self.omega_perp


_FIELDS = {f.name: f for f in fields(RunConfig)}
_HINTS = typing.get_type_hints(RunConfig)


def _base_type(name):
    hint = _HINTS[name]
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    return (args[0] if args else hint), bool(typing.get_args(hint))


def coerce(name, text, line=None):
    if name not in _FIELDS:
        raise ConfigError("unknown key", key=name, line=line)
    typ, optional = _base_type(name)
    text = text.strip()
    if optional and text.lower() in ("none", ""):
        return None
    try:
        if typ is int:
            return int(text)
        if typ is float:
            return float(text)
        return text
    except ValueError:
        raise ConfigError(f"cannot read {text!r} as {typ.__name__}", key=name, line=line) from None


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", key=line, line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        values[key] = coerce(key, value, lineno)
    cfg = dataclasses.replace(base or RunConfig(), **values)
    return cfg.validate()


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg: RunConfig) -> str:
    """Inverse of :func:`parse_config`; floats use ``repr`` so they round-trip."""
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        lines.append(f"{f.name} = {'none' if v is None else repr(v) if isinstance(v, float) else v}")
    return "\n".join(lines) + "\n"


def threads_from_env(default: int) -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}", key=THREADS_ENV) from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1", key=THREADS_ENV)
    return n


__all__ = ["RunConfig", "parse_config", "load_config", "dump_config", "coerce",
           "threads_from_env", "THREADS_ENV"]

"""
Experiment configuration.

Config files are flat ``key = value`` text, one pair per line, ``#`` starts a
comment. Unknown keys are rejected. Example::

    model = heat
    schemes = standard, partial, full
    h = 0.15
    k = 0.001
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

from invariant_schemes.errors import ConfigError
from invariant_schemes.models import Model, SchemeKind
from invariant_schemes.schemes import BoundaryPolicy, step_count
from invariant_schemes.solutions import BurgersExact, ConstantField, HeatExact

ALL_KINDS = (SchemeKind.STANDARD, SchemeKind.PARTIALLY_INVARIANT, SchemeKind.FULLY_INVARIANT)

# reference parameter sets of the two benchmark problems
_DEFAULTS = {
    Model.HEAT_LOG: dict(x_min=-5.0, x_max=5.0, h=0.15, t0=0.0, t_final=1.0, k=0.001),
    Model.SPHERICAL_BURGERS: dict(x_min=0.0, x_max=10.0, h=0.5, t0=1.0, t_final=1.5, k=0.001),
}


@dataclass(frozen=True)
class ExperimentConfig:
    model: Model
    schemes: tuple[SchemeKind, ...] = ALL_KINDS
    x_min: float = 0.0
    x_max: float = 1.0
    h: float = 0.1
    t0: float = 0.0
    t_final: float = 1.0
    k: float = 0.001
    c: float = 0.0
    c1: float = 0.0
    c2: float = 1.0
    constant: float | None = None  # constant-field mode: u = constant everywhere
    boundary: str = "exact_dirichlet"
    out_dir: str = "out"
    seed: int = 0

    @classmethod
    def defaults(cls, model, **overrides) -> ExperimentConfig:
        model = Model.parse(model)
        return cls(model=model, **{**_DEFAULTS[model], **overrides})

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)

    @property
    def steps(self) -> int:
        return step_count(self.t0, self.t_final, self.k)

    def solution(self):
        if self.constant is not None:
            return ConstantField(self.constant)
        if self.model is Model.HEAT_LOG:
            return HeatExact(self.c)
        return BurgersExact(self.c1, self.c2)

    def boundary_policy(self) -> BoundaryPolicy:
        return BoundaryPolicy(self.solution(), mode=self.boundary)

    def validate(self) -> ExperimentConfig:
        if not self.k > 0.0:
            raise ConfigError(f"k must be positive, got {self.k}")
        if not self.h > 0.0:
            raise ConfigError(f"h must be positive, got {self.h}")
        if not self.x_max > self.x_min:
            raise ConfigError(f"empty interval [{self.x_min}, {self.x_max}]")
        self.steps  # integrality of (t_final - t0) / k
        if not self.schemes:
            raise ConfigError("no schemes selected")
        if self.boundary != "exact_dirichlet":
            raise ConfigError(f"unsupported boundary policy {self.boundary!r}")
        if self.model is Model.HEAT_LOG and self.constant is not None and self.constant <= 0.0:
            raise ConfigError("heat constant field must be positive")
        if self.model is Model.SPHERICAL_BURGERS:
            if self.t0 <= 0.0:
                raise ConfigError(f"Burgers runs need t0 > 0, got {self.t0}")
            if self.constant is None:
                if self.c2 + math.log(self.t0) <= 0.0:
                    raise ConfigError("Burgers solution needs c2 + ln t > 0 on the run")
        return self


_FLOAT_KEYS = {"x_min", "x_max", "h", "t0", "t_final", "k", "c", "c1", "c2", "constant"}


def _coerce(key: str, raw: str):
    key = key.replace("-", "_")
    try:
        if key == "model":
            return key, Model.parse(raw)
        if key in ("schemes", "scheme"):
            parts = [p for p in raw.replace(",", " ").split() if p]
            kinds = ALL_KINDS if parts == ["all"] else tuple(SchemeKind.parse(p) for p in parts)
            return "schemes", kinds
        if key in _FLOAT_KEYS:
            if key == "constant" and raw.lower() in ("", "none"):
                return key, None
            return key, float(raw)
        if key == "seed":
            return key, int(raw)
        if key in ("boundary", "out_dir"):
            return key, raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from None
    raise ConfigError(f"unknown config key {key!r}")


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        name, value = _coerce(key, raw)
        values[name] = value
    return values


def load_config(path=None, model=None, **overrides) -> ExperimentConfig:
    """Build a validated config: model defaults, then the file, then ``overrides``.

    ``None`` overrides are ignored so CLI flags can be passed through unchanged.
    """
    values = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values = parse_config_text(text)
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    if model is not None:
        try:
            values["model"] = Model.parse(model)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if "model" not in values:
        raise ConfigError("model not given (use --model or 'model = ...' in the config)")
    model = values.pop("model")
    return ExperimentConfig.defaults(model, **values).validate()

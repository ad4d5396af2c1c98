"""Run configurations: one YAML mapping per run, unknown keys rejected."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from .core import Potential, SystemParams, as_fraction, fraction_str
from .errors import ConfigError

GOLDEN_HBAR = 1.0 / (11.0 + (math.sqrt(5.0) - 1.0) / 2.0)


def parse_potential(value) -> Potential:
    """``"cosine"`` (V = -cos x) or a list of ``[re, im]`` pairs for V_1..V_N."""
    if value in (None, "cosine", "-cos"):
        return Potential.cosine()
    if isinstance(value, list):
        try:
            return Potential.from_list(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad potential {value!r}") from exc
    raise ConfigError(f"bad potential {value!r}")


def potential_to_yaml(pot: Potential):
    return "cosine" if pot == Potential.cosine() else pot.to_list()


def parse_hbar(value) -> Union[Fraction, float]:
    """Exact ``"q/p"`` strings and ints become Fractions; ``"golden"`` is the irrational value used for wave packets."""
    if value == "golden":
        return GOLDEN_HBAR
    if isinstance(value, bool):
        raise ConfigError("hbar_s must be a number or 'q/p'")
    if isinstance(value, (int, str)):
        return as_fraction(value)
    if isinstance(value, float):
        return value
    raise ConfigError(f"bad hbar_s {value!r}")


def hbar_to_yaml(value):
    if isinstance(value, Fraction):
        return fraction_str(value)
    return "golden" if value == GOLDEN_HBAR else value


_CONVERTERS = {
    "potential": (parse_potential, potential_to_yaml),
    "eta": (as_fraction, fraction_str),
    "hbar_s": (parse_hbar, hbar_to_yaml),
}


@dataclass
class _Base:
    seed: int = 0
    workers: int = 1

    @classmethod
    def from_mapping(cls, data: Optional[Dict[str, Any]]) -> "_Base":
        data = dict(data or {})
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown keys for {cls.__name__}: {', '.join(unknown)}")
        kw = {}
        for key, value in data.items():
            conv = _CONVERTERS.get(key)
            kw[key] = conv[0](value) if conv else value
        try:
            cfg = cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def to_mapping(self) -> Dict[str, Any]:
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            conv = _CONVERTERS.get(f.name)
            out[f.name] = conv[1](value) if conv else value
        return out

    def validate(self) -> None:
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    def digest(self) -> str:
        blob = json.dumps(self.to_mapping(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class WebConfig(_Base):
    kappa: float = 0.1
    eta: Fraction = Fraction(0)
    x_c: float = 0.0
    potential: Potential = field(default_factory=Potential.cosine)
    start: List[float] = field(default_factory=lambda: [math.pi, 0.01])
    n_steps: int = 20000
    unfolded: bool = False

    def validate(self):
        super().validate()
        if self.n_steps < 0:
            raise ConfigError("n_steps must be >= 0")
        if len(self.start) != 2:
            raise ConfigError("start must be [u, v]")

    def params(self) -> SystemParams:
        return SystemParams.from_kappa(self.potential, self.eta, self.x_c, self.kappa)


@dataclass
class ButterflyConfig(_Base):
    mu: float = 0.1
    eta: Fraction = Fraction(2, 3)
    x_c: float = 0.0
    potential: Potential = field(default_factory=Potential.cosine)
    p_max: int = 30
    grid: List[int] = field(default_factory=lambda: [16, 16])
    cache_dir: Optional[str] = None

    def validate(self):
        super().validate()
        if self.p_max < 2:
            raise ConfigError("p_max must be >= 2")
        if len(self.grid) != 2 or min(self.grid) < 1:
            raise ConfigError("grid must be [n1, n2] with positive entries")


@dataclass
class EvolveConfig(_Base):
    mu: float = 0.1
    eta: Fraction = Fraction(2, 3)
    x_c: float = 0.0
    hbar_s: Union[Fraction, float] = GOLDEN_HBAR
    potential: Potential = field(default_factory=Potential.cosine)
    s_max: int = 2400
    record_every: Optional[int] = None
    n_beta: int = 32
    window_half: int = 64
    center_target: List[float] = field(default_factory=lambda: [math.pi / 2, math.pi / 2])
    classical_samples: int = 2000

    def validate(self):
        super().validate()
        if self.n_beta < 1 or self.window_half < 1:
            raise ConfigError("n_beta and window_half must be positive")
        if self.s_max < 0:
            raise ConfigError("s_max must be >= 0")

    def params(self) -> SystemParams:
        return SystemParams(self.potential, self.eta, self.x_c, self.hbar_s, self.mu)


@dataclass
class WidthGapConfig(_Base):
    mu: float = 0.1
    eta: Fraction = Fraction(2, 3)
    x_c: float = 0.0
    scan: int = 64

    def params(self) -> SystemParams:
        return SystemParams(Potential.cosine(), self.eta, self.x_c, Fraction(1, 2), self.mu)


@dataclass
class QarCheckConfig(_Base):
    mu: float = 0.1
    eta: Fraction = Fraction(2, 3)
    x_c: float = 0.0
    hbar_s: Union[Fraction, float] = Fraction(1)
    potential: Potential = field(default_factory=Potential.cosine)
    n_random: int = 25
    cycles: int = 100
    tol: float = 1e-10

    def params(self) -> SystemParams:
        return SystemParams(self.potential, self.eta, self.x_c, self.hbar_s, self.mu)


@dataclass
class ScalingConfig(_Base):
    eta: Fraction = Fraction(2, 3)
    x_c: float = 0.0
    potential: Potential = field(default_factory=Potential.cosine)
    kappas: List[float] = field(default_factory=lambda: [0.001, 0.002, 0.004, 0.008])
    n_points: int = 8

    def params(self) -> SystemParams:
        return SystemParams.from_kappa(self.potential, self.eta, self.x_c, self.kappas[0])


CONFIGS = {
    "web": WebConfig,
    "butterfly": ButterflyConfig,
    "evolve": EvolveConfig,
    "widthgap": WidthGapConfig,
    "qar-check": QarCheckConfig,
    "scaling": ScalingConfig,
}


def load_config(kind: str, path: Optional[Path] = None, overrides: Optional[dict] = None):
    data = {}
    if path is not None:
        try:
            data = yaml.safe_load(Path(path).read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a mapping")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return CONFIGS[kind].from_mapping(data)


def dump_config(cfg) -> str:
    return yaml.safe_dump(cfg.to_mapping(), sort_keys=True)

"""Experiment configuration: INI files with ``[experiment]``, ``[system]``,
``[numerics]`` and ``[output]`` sections, overridable from the command line."""

import configparser
import hashlib
import json
from dataclasses import asdict, dataclass, field

from .errors import ConfigError

KINDS = ("index", "iterate-verify", "galerkin-check", "solve", "subharmonic", "audit")

DEFAULT_NUMERICS = {
    "grid": 1024,
    "m": 32,
    "seeds": 20,
    "count": 20,
    "k": "3,4,5,6",
    "j": "1",
    "samples": 2000,
    "K": 4.0,
    "tol": 1e-4,
}

_INT_KEYS = {"grid", "m", "seeds", "count", "samples", "n", "seed"}
_FLOAT_KEYS = {"K", "tol", "c", "beta0", "period", "interval"}


def _coerce(key, value):
    if not isinstance(value, str):
        return value
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except ValueError:
        raise ConfigError(f"{key} = {value!r} is not a number") from None
    return value


def int_list(value):
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    try:
        return [int(v) for v in str(value).replace(" ", "").split(",") if v]
    except ValueError:
        raise ConfigError(f"expected a comma-separated integer list, got {value!r}") from None


@dataclass
class ExperimentConfig:
    kind: str
    system: dict = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    seed: int = 7

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        self.system = {k: _coerce(k, v) for k, v in self.system.items()}
        self.numerics = {**DEFAULT_NUMERICS,
                         **{k: _coerce(k, v) for k, v in self.numerics.items()}}
        self.validate()

    def validate(self):
        num = self.numerics
        for key in ("tol", "K"):
            if float(num[key]) <= 0:
                raise ConfigError(f"{key} must be positive")
        for key in ("grid", "m", "count", "samples", "seeds"):
            if int(num[key]) < 1:
                raise ConfigError(f"{key} must be at least 1")
        if self.kind in ("solve", "subharmonic", "audit") and "name" not in self.system:
            self.system["name"] = "QUARTIC"
        if self.kind == "audit" and int(num["samples"]) < 1000:
            raise ConfigError("audit needs samples >= 1000")
        int_list(num["k"])
        int_list(num["j"])
        return self

    def to_dict(self):
        return asdict(self)

    def digest(self):
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path):
    parser = configparser.ConfigParser()
    parser.optionxform = str
    if not parser.read(path):
        raise ConfigError(f"cannot read config file {path}")
    if not parser.has_section("experiment") or "kind" not in parser["experiment"]:
        raise ConfigError("config needs [experiment] kind = ...")
    exp = parser["experiment"]
    section = lambda name: dict(parser[name]) if parser.has_section(name) else {}
    try:
        seed = int(exp.get("seed", 7))
    except ValueError:
        raise ConfigError("seed must be an integer") from None
    return ExperimentConfig(exp["kind"], section("system"), section("numerics"),
                            section("output"), seed)

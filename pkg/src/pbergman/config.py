"""Run configuration: a JSON file plus command-line overrides.

The file is a nested object whose sections and keys are fixed by
``DEFAULTS``; anything else is rejected before any computation starts.
Flags given on the command line win over the file.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass

from .domains import Annulus, Disc, Domain, PuncturedDisc, UnitDisc
from .errors import ConfigError, PBergmanError
from .lp_solver import SolverOptions

DEFAULTS = {
    "domain": {"kind": "disc", "r_in": 0.5, "R": 1.0},
    "quad": {"n_r": 32, "n_theta": 64, "m_boundary": 128},
    "basis": {"N": 24},
    "solver": {"tol": 1e-11, "max_iter": 300, "eps_floor": 1e-8},
    "seed": 42,
    "output": {"dir": None, "format": "csv"},
    "params": {
        "p": [2.0],
        "z": ["0"],
        "zeta": ["0"],
        "X": "1",
        "h": 1e-4,
        "region": "subdisc:0.5",
        "multistarts": 8,
        "eps": [0.2, 0.1, 0.05],
        "s": 0.5,
        "candidates": 100,
        "oracle": "disc-diag",
        "family": 200,
        "degree": 10,
        "quick": False,
    },
}

DOMAIN_ALIASES = {
    "disc": "disc",
    "unitdisc": "disc",
    "unit-disc": "disc",
    "annulus": "annulus",
    "punctured": "punctured",
    "punctureddisc": "punctured",
    "punctured-disc": "punctured",
}


def parse_complex(text) -> complex:
    """Accept ``0.3``, ``0.6i``, ``0.6j``, ``-0.2+0.5i`` and numbers."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot read {text!r} as a complex number") from None


def _merge(base: dict, update: dict, path: str = "") -> None:
    for key, value in update.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {where!r} must be an object")
            _merge(base[key], value, where + ".")
        else:
            base[key] = value


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


@dataclass
class RunConfig:
    """Validated settings for one command."""

    data: dict

    @classmethod
    def build(cls, file_data: dict | None = None, overrides: dict | None = None) -> "RunConfig":
        data = copy.deepcopy(DEFAULTS)
        if file_data:
            if not isinstance(file_data, dict):
                raise ConfigError("config file must hold a JSON object")
            _merge(data, file_data)
        if overrides:
            _merge(data, overrides)
        cfg = cls(data)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path, overrides: dict | None = None) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                file_data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.build(file_data, overrides)

    # -- validation -------------------------------------------------------------

    def validate(self) -> None:
        d = self.data
        kind = str(d["domain"]["kind"]).lower()
        if kind not in DOMAIN_ALIASES:
            raise ConfigError(f"unknown domain kind {d['domain']['kind']!r}")
        d["domain"]["kind"] = DOMAIN_ALIASES[kind]
        for sec, key in (("quad", "n_r"), ("quad", "n_theta"), ("quad", "m_boundary"), ("basis", "N"), ("solver", "max_iter")):
            v = d[sec][key]
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"{sec}.{key} must be a positive integer, got {v!r}")
        for key in ("tol", "eps_floor"):
            v = d["solver"][key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                raise ConfigError(f"solver.{key} must be a positive number, got {v!r}")
        if isinstance(d["seed"], bool) or not isinstance(d["seed"], int) or d["seed"] < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {d['seed']!r}")
        if d["output"]["format"] not in ("csv", "json"):
            raise ConfigError("output.format must be 'csv' or 'json'")
        params = d["params"]
        try:
            params["p"] = [float(x) for x in _as_list(params["p"])]
            params["eps"] = [float(x) for x in _as_list(params["eps"])]
        except (TypeError, ValueError):
            raise ConfigError("params.p and params.eps must be numbers") from None
        for key in ("z", "zeta"):
            params[key] = [str(x) for x in _as_list(params[key])]
            for x in params[key]:
                parse_complex(x)
        parse_complex(params["X"])
        try:
            self.domain()
        except PBergmanError as exc:
            raise ConfigError(str(exc)) from exc

    # -- accessors ----------------------------------------------------------------

    def domain(self) -> Domain:
        dom = self.data["domain"]
        if dom["kind"] == "annulus":
            return Annulus(dom["r_in"])
        if dom["kind"] == "punctured":
            return PuncturedDisc()
        R = float(dom["R"])
        return UnitDisc() if R == 1.0 else Disc(R)

    def solver_options(self) -> SolverOptions:
        s = self.data["solver"]
        return SolverOptions(tol=float(s["tol"]), max_iter=int(s["max_iter"]), eps_floor=float(s["eps_floor"]))

    @property
    def N(self) -> int:
        return self.data["basis"]["N"]

    @property
    def grid_kw(self) -> dict:
        q = self.data["quad"]
        return {"n_r": q["n_r"], "n_theta": q["n_theta"]}

    @property
    def params(self) -> dict:
        return self.data["params"]

    @property
    def seed(self) -> int:
        return self.data["seed"]

    def points(self, key: str = "z") -> list[complex]:
        return [parse_complex(x) for x in self.params[key]]

    def canonical(self) -> str:
        """Canonical JSON of everything that affects results (output settings excluded)."""
        data = {k: v for k, v in self.data.items() if k != "output"}
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]

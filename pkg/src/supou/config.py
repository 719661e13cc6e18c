"""Versioned JSON experiment configuration.

Layout (version 1)::

    {
      "version": 1,
      "seed": 12345,                              # optional
      "model": {"a": "natural", "b": 0.0,
                "mu": {"kind": "compound_poisson", "rate": 0.8,
                       "jumps": {"kind": "pareto", "gamma": 0.8, "p": 0.5, "q": 0.5}},
                "pi": {"kind": "gamma", "alpha": 0.5}},
      "simulation": {"horizon": 100.0, "step": 1.0, "m": 64, "n_rep": 10},
      "verification": {"T_ladder": [100, 1000, 10000], "thresholds": {"ecf": 0.1}},
      "output": {"csv": "paths.csv", "report": "report.json"}
    }

``simulation`` accepts either ``grid`` (explicit times) or ``horizon`` plus ``step``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .model import CharacteristicQuadruple
from .simulate import SimConfig
from .verify import Thresholds

VERSION = 1

_SIM_KEYS = {"grid", "horizon", "step", "m", "n_rep", "burn_in", "small_jump_cutoff", "rates", "n_sub", "h_max",
             "rel_tol"}
_VERIFY_KEYS = {"T_ladder", "thresholds", "hill_k", "quantile"}
_TOP_KEYS = {"version", "seed", "model", "simulation", "verification", "output"}


class ConfigError(ValueError):
    """Invalid configuration; ``where`` names the offending field."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass
class ExperimentConfig:
    quad: CharacteristicQuadruple
    sim: dict
    verification: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    seed: int | None = None
    raw: dict = field(default_factory=dict)

    def sim_config(self, seed: int) -> SimConfig:
        s = dict(self.sim)
        if "grid" in s:
            grid = s.pop("grid")
            s.pop("horizon", None)
            s.pop("step", None)
            return SimConfig(grid=tuple(grid), seed=seed, **s)
        horizon, step = s.pop("horizon"), s.pop("step")
        return SimConfig.uniform(horizon, step, seed=seed, **s)

    @property
    def T_ladder(self):
        return [float(t) for t in self.verification.get("T_ladder", (1e2, 1e3, 1e4))]

    @property
    def thresholds(self) -> Thresholds:
        return Thresholds.from_dict(self.verification.get("thresholds"))


def _unknown(d, allowed, where):
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(where, f"unknown field(s) {', '.join(extra)}")


def parse_config(d: dict) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ConfigError("$", "top level must be an object")
    _unknown(d, _TOP_KEYS, "$")
    if d.get("version") != VERSION:
        raise ConfigError("version", f"expected {VERSION}, got {d.get('version')!r}")
    seed = d.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
        raise ConfigError("seed", "must be a non-negative integer")
    if "model" not in d:
        raise ConfigError("model", "missing")
    try:
        quad = CharacteristicQuadruple.from_dict(d["model"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("model", str(exc) or type(exc).__name__) from exc
    sim = dict(d.get("simulation", {}))
    _unknown(sim, _SIM_KEYS, "simulation")
    if "grid" not in sim and not {"horizon", "step"} <= set(sim):
        raise ConfigError("simulation", "needs 'grid' or both 'horizon' and 'step'")
    ver = dict(d.get("verification", {}))
    _unknown(ver, _VERIFY_KEYS, "verification")
    if "thresholds" in ver:
        try:
            Thresholds.from_dict(ver["thresholds"])
        except (TypeError, ValueError) as exc:
            raise ConfigError("verification.thresholds", str(exc)) from exc
    out = dict(d.get("output", {}))
    _unknown(out, {"csv", "report"}, "output")
    cfg = ExperimentConfig(quad, sim, ver, out, seed, d)
    try:
        cfg.sim_config(0 if seed is None else seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError("simulation", str(exc)) from exc
    if "T_ladder" in ver:
        lad = ver["T_ladder"]
        if not isinstance(lad, list) or not all(isinstance(t, (int, float)) and t > 0 and math.isfinite(t)
                                                for t in lad):
            raise ConfigError("verification.T_ladder", "must be a list of positive numbers")
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    return parse_config(d)

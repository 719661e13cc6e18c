"""Parametric slowly varying functions ``C * (log x)^rho`` and de Bruijn conjugates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SlowlyVarying:
    """``h(x) = scale * (log x)^log_power`` for ``x >= e`` and ``scale`` below ``e``.

    ``SlowlyVarying.constant(C)`` and ``SlowlyVarying.log_power(rho)`` are the two
    named members; products of them stay in the family, so de Bruijn conjugates
    and power compositions are closed-form.
    """

    scale: float = 1.0
    power: float = 0.0

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError(f"slowly varying scale must be positive and finite, got {self.scale}")
        if not math.isfinite(self.power):
            raise ValueError("log power must be finite")

    @classmethod
    def constant(cls, value: float) -> "SlowlyVarying":
        return cls(float(value), 0.0)

    @classmethod
    def log_power(cls, rho: float) -> "SlowlyVarying":
        return cls(1.0, float(rho))

    @property
    def is_constant(self) -> bool:
        return self.power == 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.power == 0.0:
            out = np.full_like(x, self.scale)
        else:
            lx = np.log(np.maximum(x, math.e))
            out = self.scale * lx ** self.power
        return out if out.ndim else float(out)

    def reciprocal(self) -> "SlowlyVarying":
        return SlowlyVarying(1.0 / self.scale, -self.power)

    def compose_power(self, p: float) -> "SlowlyVarying":
        """Asymptotic form of ``x -> h(x**p)`` for ``p > 0``: ``scale * p^rho * (log x)^rho``."""
        if p <= 0:
            raise ValueError("composition exponent must be positive")
        return SlowlyVarying(self.scale * p ** self.power, self.power)

    def pow(self, e: float) -> "SlowlyVarying":
        return SlowlyVarying(self.scale ** e, self.power * e)

    def de_bruijn(self) -> "SlowlyVarying":
        return de_bruijn_conjugate(self)

    def to_dict(self) -> dict:
        if self.power == 0.0:
            return {"kind": "constant", "value": self.scale}
        if self.scale == 1.0:
            return {"kind": "log_power", "rho": self.power}
        return {"kind": "scaled_log_power", "scale": self.scale, "rho": self.power}

    @classmethod
    def from_dict(cls, d: dict) -> "SlowlyVarying":
        kind = d.get("kind", "constant")
        if kind == "constant":
            return cls.constant(d["value"])
        if kind == "log_power":
            return cls.log_power(d["rho"])
        if kind == "scaled_log_power":
            return cls(float(d["scale"]), float(d["rho"]))
        raise ValueError(f"unsupported slowly varying family {kind!r}")


def de_bruijn_conjugate(h: SlowlyVarying) -> SlowlyVarying:
    """Return ``h#`` with ``h(x) h#(x h(x)) -> 1``.

    For ``C (log x)^rho`` this is ``C^-1 (log x)^-rho``: ``log(x h(x)) ~ log x``.
    """
    if not isinstance(h, SlowlyVarying):
        raise TypeError(f"unsupported slowly varying family: {type(h).__name__}")
    return SlowlyVarying(1.0 / h.scale, -h.power)

"""Limit regimes of the integrated process, normalising sequences and limit-law parameters."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from scipy import special

from .distributions import StableLaw, doa_params
from .levy import UNBOUNDED_INDEX_ZERO, LightTailError
from .model import (CharacteristicQuadruple, GammaPi, bg_index, pi_moment, pi_regvar, tail_indices_at_infinity,
                    tail_indices_at_zero)
from .slowvar import SlowlyVarying, de_bruijn_conjugate

STABLE = "StableLevy"
SUM_STABLE = "SumStable"
ZPROC = "ZProcess"
FBM = "FBM"
BROWNIAN = "Brownian"
BOUNDARY = "Boundary"

_EQ_TOL = 1e-12


class InvalidParameters(ValueError):
    pass


class InfiniteMomentError(ValueError):
    pass


class BoundaryError(ValueError):
    pass


@dataclass(slots=True)
class RegimeReport:
    """Classifier output. ``regime`` is a tag; ``boundary`` names the boundary set when ``regime == "Boundary"``."""

    regime: str
    exponent: float = math.nan
    index: float = math.nan
    H: float = math.nan
    gamma: float = math.nan
    alpha: float = math.nan
    beta: object = None
    gaussian: bool = False
    boundary: str = ""
    route: str = ""
    sv_factor: object = None
    limit_law: object = None
    hypotheses: list = field(default_factory=list)

    @property
    def definite(self) -> bool:
        return self.regime != BOUNDARY

    @property
    def label(self) -> str:
        if self.regime in (STABLE, SUM_STABLE):
            return f"{self.regime}({self.index:g})"
        if self.regime == ZPROC:
            return f"ZProcess(alpha={self.alpha:g}, beta={self.beta:g})"
        if self.regime == FBM:
            return f"FBM(H={self.H:g})"
        if self.regime == BOUNDARY:
            return f"Boundary({self.boundary})"
        return self.regime

    def to_dict(self) -> dict:
        def num(x):
            return None if isinstance(x, float) and math.isnan(x) else x

        return {
            "schema": "supou.regime/1",
            "regime": self.regime,
            "label": self.label,
            "exponent": num(self.exponent),
            "index": num(self.index),
            "H": num(self.H),
            "parameters": {"gamma": num(self.gamma), "alpha": num(self.alpha), "beta": self.beta,
                           "gaussian": self.gaussian},
            "boundary": self.boundary or None,
            "route": self.route or None,
            "sv_factor": self.sv_factor.to_dict() if isinstance(self.sv_factor, SlowlyVarying) else None,
            "limit_law": self.limit_law,
            "hypotheses": [{"condition": c, "status": s} for c, s in self.hypotheses],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "RegimeReport":
        nan = lambda x: math.nan if x is None else x
        p = d.get("parameters", {})
        sv = d.get("sv_factor")
        return cls(regime=d["regime"], exponent=nan(d.get("exponent")), index=nan(d.get("index")),
                   H=nan(d.get("H")), gamma=nan(p.get("gamma")), alpha=nan(p.get("alpha")), beta=p.get("beta"),
                   gaussian=bool(p.get("gaussian", False)), boundary=d.get("boundary") or "",
                   route=d.get("route") or "", sv_factor=SlowlyVarying.from_dict(sv) if sv else None,
                   limit_law=d.get("limit_law"),
                   hypotheses=[(h["condition"], h["status"]) for h in d.get("hypotheses", [])])


def _close(x, y):
    return abs(x - y) <= _EQ_TOL * max(1.0, abs(y))


def _check(gamma, alpha, beta):
    if not (isinstance(gamma, (int, float)) and 0 < gamma < 2):
        raise InvalidParameters(f"gamma must lie in (0, 2), got {gamma!r}")
    if not (isinstance(alpha, (int, float)) and alpha > 0 and math.isfinite(alpha)):
        raise InvalidParameters(f"alpha must be positive, got {alpha!r}")
    if beta is not None and beta != UNBOUNDED_INDEX_ZERO and not (0 <= beta < 2):
        raise InvalidParameters(f"beta must lie in [0, 2), got {beta!r}")


def _stable(gamma, alpha, beta, gaussian, route):
    return RegimeReport(STABLE, 1.0 / gamma, gamma, math.nan, gamma, alpha, beta, gaussian, route=route)


def _boundary(gamma, alpha, beta, gaussian, which):
    return RegimeReport(BOUNDARY, gamma=gamma, alpha=alpha, beta=beta, gaussian=gaussian, boundary=which)


def classify_regime(gamma, alpha, beta=None, gaussian=False, bg=None) -> RegimeReport:
    """Limit regime of ``X*(Tt)`` from the tail index ``gamma``, ``alpha`` of ``pi`` and ``beta`` of ``mu`` at zero.

    ``beta`` may be the unbounded-index sentinel, in which case ``bg`` (the
    Blumenthal-Getoor index) decides the ``gamma > 1 + alpha`` branch when
    ``bg < 1 + alpha``. Boundary sets return a ``Boundary`` report.
    """
    _check(gamma, alpha, beta)
    if bg is not None and not 0 <= bg < 2:
        raise InvalidParameters("Blumenthal-Getoor index must lie in [0, 2)")
    if gaussian:
        if _close(alpha, 1.0):
            return _boundary(gamma, alpha, beta, gaussian, "alpha=1")
        if alpha > 1:
            return _stable(gamma, alpha, beta, gaussian, "gaussian: alpha>1")
        edge = 2.0 / (2.0 - alpha)
        if _close(gamma, edge):
            return _boundary(gamma, alpha, beta, gaussian, "gamma=2/(2-alpha)")
        if gamma < edge:
            return _stable(gamma, alpha, beta, gaussian, "gaussian: alpha<1, gamma<2/(2-alpha)")
        h = 1.0 - alpha / 2.0
        return RegimeReport(FBM, h, 2.0, h, gamma, alpha, beta, gaussian, route="gaussian: gamma>2/(2-alpha)")
    one_a = 1.0 + alpha
    if _close(gamma, one_a):
        return _boundary(gamma, alpha, beta, gaussian, "gamma=1+alpha")
    if gamma < one_a:
        return _stable(gamma, alpha, beta, gaussian, "gamma<1+alpha")
    if beta is None or beta == UNBOUNDED_INDEX_ZERO:
        if bg is None:
            raise InvalidParameters("gamma > 1 + alpha needs beta (or a Blumenthal-Getoor index)")
        if bg < one_a:
            return RegimeReport(SUM_STABLE, 1.0 / one_a, one_a, math.nan, gamma, alpha, beta, gaussian,
                                route="gamma>1+alpha, Blumenthal-Getoor index < 1+alpha")
        raise InvalidParameters("without power-law constants at zero the case bg >= 1 + alpha is undetermined")
    if _close(beta, one_a):
        return _boundary(gamma, alpha, beta, gaussian, "beta=1+alpha")
    if beta < one_a:
        return RegimeReport(SUM_STABLE, 1.0 / one_a, one_a, math.nan, gamma, alpha, beta, gaussian,
                            route="gamma>1+alpha, beta<1+alpha")
    h = 1.0 - alpha / beta
    return RegimeReport(ZPROC, h, beta, h, gamma, alpha, beta, gaussian, route="gamma>1+alpha, beta>1+alpha")


# ------------------------------------------------------------------ components


def classify_x1(gamma, alpha) -> RegimeReport:
    """Big-jump component: ``gamma`` against ``1 + alpha``."""
    _check(gamma, alpha, None)
    if _close(gamma, 1.0 + alpha):
        return _boundary(gamma, alpha, None, False, "gamma=1+alpha")
    if gamma < 1.0 + alpha:
        return _stable(gamma, alpha, None, False, "x1: gamma<1+alpha")
    return RegimeReport(STABLE, 1.0 / (1 + alpha), 1.0 + alpha, math.nan, gamma, alpha, None, False,
                        route="x1: gamma>1+alpha")


def classify_x2(alpha, beta) -> RegimeReport:
    """Compensated small-jump component: the ``alpha = 1`` and ``beta = 1 + alpha`` lines."""
    _check(1.0, alpha, beta)
    if _close(alpha, 1.0):
        return _boundary(math.nan, alpha, beta, False, "alpha=1")
    if alpha > 1:
        return RegimeReport(BROWNIAN, 0.5, 2.0, 0.5, math.nan, alpha, beta, False, route="x2: alpha>1")
    if _close(beta, 1.0 + alpha):
        return _boundary(math.nan, alpha, beta, False, "beta=1+alpha")
    if beta < 1.0 + alpha:
        return RegimeReport(STABLE, 1.0 / (1 + alpha), 1.0 + alpha, math.nan, math.nan, alpha, beta, False,
                            route="x2: beta<1+alpha")
    h = 1.0 - alpha / beta
    return RegimeReport(ZPROC, h, beta, h, math.nan, alpha, beta, False, route="x2: beta>1+alpha")


def classify_x3(alpha) -> RegimeReport:
    """Gaussian component: Brownian for ``alpha > 1``, fBm with ``H = 1 - alpha/2`` below."""
    _check(1.0, alpha, None)
    if _close(alpha, 1.0):
        return _boundary(math.nan, alpha, None, True, "alpha=1")
    if alpha > 1:
        return RegimeReport(BROWNIAN, 0.5, 2.0, 0.5, math.nan, alpha, None, True, route="x3: alpha>1")
    h = 1.0 - alpha / 2.0
    return RegimeReport(FBM, h, 2.0, h, math.nan, alpha, None, True, route="x3: alpha<1")


def compose_components(gamma, alpha, beta, gaussian=False):
    """Largest normalising exponent among the component regimes (ties of two ``1+alpha`` laws give a sum).

    Returns ``(regime_tag, exponent)`` or ``(BOUNDARY, nan)`` when a relevant component sits on a boundary.
    """
    parts = [classify_x1(gamma, alpha), classify_x2(alpha, beta)]
    if gaussian:
        parts.append(classify_x3(alpha))
    if any(not p.definite for p in parts):
        return BOUNDARY, math.nan
    top = max(p.exponent for p in parts)
    win = [p for p in parts if _close(p.exponent, top)]
    if len(win) > 1 and all(p.regime == STABLE and _close(p.index, 1 + alpha) for p in win):
        return SUM_STABLE, top
    return win[0].regime, top


def component_exponent_gap(gamma, alpha, beta):
    """``True`` when the small-jump exponent ``1 - alpha/beta`` exceeds ``1/gamma`` although ``gamma < 1 + alpha``.

    There the comparison of normalising orders used for the stable-Lévy case
    does not hold (it needs ``beta <= gamma`` when ``gamma > 1``).
    """
    if beta is None or beta == UNBOUNDED_INDEX_ZERO or alpha >= 1 or gamma >= 1 + alpha or beta <= 1 + alpha:
        return False
    return 1.0 - alpha / beta > 1.0 / gamma


# ------------------------------------------------------------------ normalisation


def sv_factor(report: RegimeReport, k: SlowlyVarying, ell: SlowlyVarying) -> SlowlyVarying:
    """Slowly varying part ``s`` of ``A_T = T^E s(T)``."""
    r = report.regime
    if r == STABLE and not report.route.startswith(("x1: gamma>", "x2:")):
        g = report.index
        h = k.compose_power(1.0 / g).reciprocal()
        return de_bruijn_conjugate(h).pow(1.0 / g)
    if r in (SUM_STABLE, STABLE):
        e = report.index
        h = ell.compose_power(1.0 / e).reciprocal()
        return de_bruijn_conjugate(h).pow(1.0 / e)
    if r == ZPROC:
        return ell.pow(1.0 / report.beta)
    if r == FBM:
        return ell.pow(0.5)
    if r == BROWNIAN:
        return SlowlyVarying.constant(1.0)
    raise BoundaryError("boundary reports have no normalising sequence")


def normalization_at(report: RegimeReport, T: float, k: SlowlyVarying | None = None,
                     ell: SlowlyVarying | None = None) -> float:
    """``A_T`` for the report's regime."""
    if not report.definite:
        raise BoundaryError("boundary reports have no normalising sequence")
    for h in (k, ell):
        if h is not None and not isinstance(h, SlowlyVarying):
            raise TypeError(f"unsupported slowly varying family: {type(h).__name__}")
    k = k or SlowlyVarying.constant(1.0)
    ell = ell or SlowlyVarying.constant(1.0)
    return T ** report.exponent * float(sv_factor(report, k, ell)(T))


# ------------------------------------------------------------------ limit laws


def _stable_scale_from_tails(index, c_sum):
    """``(Gamma(2-g)/(1-g) c cos(pi g/2))^{1/g}`` with its continuous value at ``g = 1``."""
    if abs(index - 1.0) < 1e-9:
        f = 0.5 * math.pi
    else:
        f = special.gamma(2.0 - index) / (1.0 - index) * math.cos(0.5 * math.pi * index)
    return (f * c_sum) ** (1.0 / index)


def _skew(cp, cm):
    s = cp + cm
    return 0.0 if s == 0 else (cp - cm) / s


def regime_for(quad: CharacteristicQuadruple) -> RegimeReport:
    """Classify directly from a quadruple."""
    alpha, _ = pi_regvar(quad.pi)
    if quad.mu.is_zero():
        if quad.b <= 0:
            raise InvalidParameters("degenerate quadruple: no jumps and no Gaussian part")
        rep = classify_x3(alpha)
        rep.hypotheses = hypotheses(quad, rep)
        return rep
    tail = tail_indices_at_infinity(quad.mu, quad.a, quad.b)
    z = tail_indices_at_zero(quad.mu)
    beta = z if z == UNBOUNDED_INDEX_ZERO else z[0]
    rep = classify_regime(tail.gamma, alpha, beta, quad.b > 0, bg=bg_index(quad.mu))
    rep.hypotheses = hypotheses(quad, rep)
    return rep


def hypotheses(quad: CharacteristicQuadruple, rep: RegimeReport):
    out = []
    m = quad.mean()
    if rep.gamma > 1 or quad.mu.is_zero():
        ok = math.isfinite(m) and abs(m) < 1e-9
        out.append(("E L(1) = 0 when gamma > 1", "satisfied" if ok else "violated"))
    fm = pi_moment(quad.pi, 1.0)
    out.append(("int xi pi(d xi) < inf", "satisfied" if math.isfinite(fm) else "violated"))
    out.append(("pi density monotone near 0",
                "satisfied" if isinstance(quad.pi, GammaPi) else "unknown"))
    if rep.regime == STABLE and rep.gamma is not None and not rep.gaussian:
        if component_exponent_gap(rep.gamma, rep.alpha, rep.beta):
            out.append(("1 - alpha/beta < 1/gamma (small jumps dominated)", "violated"))
    return out


def limit_stable_params(report: RegimeReport, quad: CharacteristicQuadruple) -> dict:
    """Limit-law descriptor for ``report`` under ``quad``. Stable regimes carry a ``StableLaw`` dict."""
    if not report.definite:
        raise BoundaryError("no limit law on a boundary")
    alpha = quad.pi.alpha
    if report.regime == STABLE:
        tail = tail_indices_at_infinity(quad.mu, quad.a, quad.b)
        g = tail.gamma
        sigma, rho = doa_params(tail)
        mom = pi_moment(quad.pi, 1.0 - g)
        if not math.isfinite(mom):
            raise InfiniteMomentError(f"int xi^(1-gamma) pi(d xi) diverges for gamma={g}")
        sig = sigma * (g * mom) ** (1.0 / g)
        law = StableLaw(g, sig, rho if g != 1.0 else 0.0)
        out = {"kind": "stable", "law": law.to_dict(), "marginal_sigma": sigma, "marginal_rho": rho,
               "pi_moment": mom}
        if abs(g - 1.0) < 1e-9:
            out["convention"] = "limit convention at gamma=1"
        return out
    if report.regime == SUM_STABLE:
        e = 1.0 + alpha
        w = alpha / e
        mu = quad.mu
        c1p = w * mu.abs_moment(e, 1.0, math.inf, 1)
        c1m = w * mu.abs_moment(e, 1.0, math.inf, -1)
        c2p = w * mu.abs_moment(e, 0.0, 1.0, 1)
        c2m = w * mu.abs_moment(e, 0.0, 1.0, -1)
        s1 = _stable_scale_from_tails(e, c1p + c1m) if c1p + c1m > 0 else 0.0
        s2 = _stable_scale_from_tails(e, c2p + c2m) if c2p + c2m > 0 else 0.0
        r1, r2 = _skew(c1p, c1m), _skew(c2p, c2m)
        p1, p2 = s1 ** e, s2 ** e
        sig = (p1 + p2) ** (1.0 / e)
        rho = (r1 * p1 + r2 * p2) / (p1 + p2) if p1 + p2 > 0 else 0.0
        return {"kind": "stable", "law": StableLaw(e, sig, rho).to_dict(),
                "big_jumps": {"sigma": s1, "rho": r1, "c_plus": c1p, "c_minus": c1m},
                "small_jumps": {"sigma": s2, "rho": r2, "c_plus": c2p, "c_minus": c2m}}
    if report.regime == ZPROC:
        beta, cp, cm = tail_indices_at_zero(quad.mu)
        return {"kind": "zprocess", "H": report.H, "alpha": alpha, "beta": beta,
                "basis_law": StableLaw(beta, _stable_scale_from_tails(beta, cp + cm), _skew(cp, cm) if beta != 1 else 0.0
                                       ).to_dict(),
                "control_measure": "alpha xi^alpha d xi ds", "c_plus": cp, "c_minus": cm}
    if report.regime == FBM:
        b = quad.b
        base = special.gamma(1.0 + alpha) / ((2.0 - alpha) * (1.0 - alpha))
        cands = []
        for name, val in (("b^2/2 * G", 0.5 * b * b * base), ("b * G", b * base)):
            cands.append({"name": f"sigma = {name}", "sigma": val, "variance": val * val})
            cands.append({"name": f"sigma^2 = {name}", "sigma": math.sqrt(val), "variance": val})
        return {"kind": "fbm", "H": report.H, "candidates": cands,
                "variance_asymptotic": b * base}
    if report.regime == BROWNIAN:
        inv = pi_moment(quad.pi, -1.0)
        return {"kind": "brownian", "variance": quad.b * inv}
    raise BoundaryError(report.regime)


__all__ = [
    "BOUNDARY", "BROWNIAN", "FBM", "STABLE", "SUM_STABLE", "ZPROC", "BoundaryError", "InfiniteMomentError",
    "InvalidParameters", "LightTailError", "RegimeReport", "classify_regime", "classify_x1", "classify_x2",
    "classify_x3", "component_exponent_gap", "compose_components", "hypotheses", "limit_stable_params",
    "normalization_at", "regime_for", "sv_factor",
]

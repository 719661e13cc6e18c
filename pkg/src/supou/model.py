"""The characteristic quadruple ``(a, b, mu, pi)`` and its asymptotic descriptors."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .distributions import RegVarTail
from .levy import (UNBOUNDED_INDEX_ZERO, GeometricStable, LevyMeasure, LightTailError, QuadratureError,
                   StablePair, Student, ZeroMeasure, levy_from_dict)
from .slowvar import SlowlyVarying, de_bruijn_conjugate  # noqa: F401  (re-exported)

# ------------------------------------------------------------------ pi


class PiSpec:
    """Probability measure of the mean-reversion rates."""

    alpha: float
    ell: SlowlyVarying

    def moment(self, theta: float) -> float:
        raise NotImplementedError

    def laplace(self, t: float) -> float:
        raise NotImplementedError

    def quantile(self, u):
        raise NotImplementedError

    def sample(self, rng, size):
        return self.quantile(rng.random(size))


@dataclass(frozen=True)
class GammaPi(PiSpec):
    """Gamma(alpha, 1) rates: density ``x^{alpha-1} e^{-x} / Gamma(alpha)``."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("Gamma shape must be positive")

    @property
    def ell(self):
        return SlowlyVarying.constant(1.0 / special.gamma(self.alpha + 1.0))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp((self.alpha - 1) * np.log(x) - x - special.gammaln(self.alpha))

    def moment(self, theta):
        if self.alpha + theta <= 0:
            return math.inf
        return math.exp(special.gammaln(self.alpha + theta) - special.gammaln(self.alpha))

    def laplace(self, t):
        return (1.0 + t) ** (-self.alpha)

    def quantile(self, u):
        return special.gammaincinv(self.alpha, u)

    def to_dict(self):
        return {"kind": "gamma", "alpha": self.alpha}


@dataclass(frozen=True, eq=False)
class TabulatedPi(PiSpec):
    """Density samples ``(x_i, p_i)`` with declared regular variation ``pi((0,x]) ~ ell(1/x) x^alpha``.

    The density is normalised on the grid (trapezoid) and extended below the
    first point by ``C x^{alpha-1}`` with ``C`` matched to the first sample.
    """

    alpha: float
    ell: SlowlyVarying
    x: tuple
    density_values: tuple
    _cdf: np.ndarray = field(init=False, repr=False)
    _head: float = field(init=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.density_values, dtype=float)
        if x.ndim != 1 or x.size < 3 or x.size != p.size:
            raise ValueError("need at least three matching density samples")
        if np.any(np.diff(x) <= 0) or x[0] <= 0:
            raise ValueError("grid must be positive and strictly increasing")
        if np.any(p < 0):
            raise ValueError("density must be non-negative")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        head = p[0] * x[0] / self.alpha
        body = integrate.cumulative_trapezoid(p, x, initial=0.0)
        total = head + body[-1]
        if not math.isclose(total, 1.0, rel_tol=1e-3):
            raise ValueError(f"density integrates to {total:.6f}, not 1")
        object.__setattr__(self, "x", tuple(x))
        object.__setattr__(self, "density_values", tuple(p / total))
        object.__setattr__(self, "_cdf", (head + body) / total)
        object.__setattr__(self, "_head", head / total)
        k = max(3, int(np.searchsorted(x, 10.0 * x[0])))
        if np.any(np.diff(p[:k]) * (1 if self.alpha < 1 else -1) > 0):
            warnings.warn("density is not monotone near zero", stacklevel=2)

    def density(self, x):
        xs = np.asarray(self.x)
        ps = np.asarray(self.density_values)
        x = np.asarray(x, dtype=float)
        out = np.interp(x, xs, ps, right=0.0)
        return np.where(x < xs[0], ps[0] * (x / xs[0]) ** (self.alpha - 1), out)

    def _integral(self, f):
        xs = np.asarray(self.x)
        ps = np.asarray(self.density_values)
        return integrate.trapezoid(f(xs) * ps, xs)

    def moment(self, theta):
        if self.alpha + theta <= 0:
            return math.inf
        xs = np.asarray(self.x)
        ps = np.asarray(self.density_values)
        head = ps[0] * xs[0] ** (theta + 1) / (self.alpha + theta)
        return head + self._integral(lambda v: v ** theta)

    def laplace(self, t):
        xs = np.asarray(self.x)
        ps = np.asarray(self.density_values)
        head = integrate.quad(lambda v: np.exp(-t * v) * ps[0] * (v / xs[0]) ** (self.alpha - 1), 0, xs[0])[0]
        return head + self._integral(lambda v: np.exp(-t * v))

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        xs = np.asarray(self.x)
        out = np.interp(u, self._cdf, xs)
        return np.where(u < self._head, xs[0] * (u / self._head) ** (1.0 / self.alpha), out)

    def to_dict(self):
        return {"kind": "tabulated", "alpha": self.alpha, "ell": self.ell.to_dict(),
                "x": list(self.x), "density": list(self.density_values)}


def pi_from_dict(d: dict) -> PiSpec:
    kind = d.get("kind")
    if kind == "gamma":
        return GammaPi(float(d["alpha"]))
    if kind == "tabulated":
        return TabulatedPi(float(d["alpha"]), SlowlyVarying.from_dict(d.get("ell", {"kind": "constant", "value": 1})),
                           tuple(d["x"]), tuple(d["density"]))
    raise ValueError(f"unknown pi kind {kind!r}")


# ------------------------------------------------------------------ quadruple


@dataclass(frozen=True, eq=False)
class CharacteristicQuadruple:
    """Drift ``a``, Gaussian variance ``b``, Lévy measure ``mu`` and rate measure ``pi``."""

    a: float
    b: float
    mu: LevyMeasure
    pi: PiSpec

    def __post_init__(self):
        if self.b < 0 or not math.isfinite(self.b):
            raise ValueError("Gaussian variance b must be finite and non-negative")
        if not math.isfinite(self.a):
            raise ValueError("drift must be finite")

    @classmethod
    def mean_zero(cls, b: float, mu: LevyMeasure, pi: PiSpec) -> "CharacteristicQuadruple":
        """Solve for the drift giving ``E L(1) = 0``; requires a finite mean."""
        m = mu.mean_outside_unit()
        if not math.isfinite(m):
            raise ValueError("the BDLP has no finite mean; zero-mean drift is undefined")
        return cls(-m, b, mu, pi)

    @classmethod
    def natural(cls, mu: LevyMeasure, pi: PiSpec, b: float = 0.0) -> "CharacteristicQuadruple":
        """Triplet drift implied by the named law (Student location, geometric stable compensation).

        Stable and compound Poisson measures get the zero-mean drift when the
        mean exists and zero drift otherwise.
        """
        if isinstance(mu, Student):
            return cls(mu.c, b, mu, pi)
        if isinstance(mu, GeometricStable):
            return cls(mu.natural_drift(), b, mu, pi)
        m = mu.mean_outside_unit() if not mu.is_zero() else 0.0
        return cls(-m if math.isfinite(m) else 0.0, b, mu, pi)

    def mean(self) -> float:
        """``E L(1) = a + int_{|x|>1} x mu(dx)`` (infinite or nan when undefined)."""
        if self.mu.is_zero():
            return self.a
        mp = self.mu.abs_moment(1.0, 1.0, math.inf, 1)
        mm = self.mu.abs_moment(1.0, 1.0, math.inf, -1)
        if math.isinf(mp) or math.isinf(mm):
            return math.nan
        return self.a + mp - mm

    def replace(self, **kw) -> "CharacteristicQuadruple":
        d = dict(a=self.a, b=self.b, mu=self.mu, pi=self.pi)
        d.update(kw)
        return CharacteristicQuadruple(**d)

    def to_dict(self):
        return {"a": self.a, "b": self.b, "mu": self.mu.to_dict(), "pi": self.pi.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "CharacteristicQuadruple":
        mu = levy_from_dict(d.get("mu", {"kind": "zero"}))
        pi = pi_from_dict(d["pi"])
        b = float(d.get("b", 0.0))
        a = d.get("a", "natural")
        if a == "natural":
            return cls.natural(mu, pi, b)
        if a == "mean_zero":
            return cls.mean_zero(b, mu, pi)
        return cls(float(a), b, mu, pi)


# ------------------------------------------------------------------ descriptors


def tail_indices_at_zero(mu: LevyMeasure):
    """``(beta, c+, c-)`` with ``M+-(x) ~ c+- x^-beta`` at zero, or the unbounded-index sentinel.

    Finite measures report ``beta = 0`` with zero constants.
    """
    if mu.is_zero():
        return 0.0, 0.0, 0.0
    return mu.tail_at_zero()


def bg_index(mu: LevyMeasure) -> float:
    """Blumenthal-Getoor index: infimum of ``r`` with finite ``int_{|x|<=1} |x|^r mu(dx)``."""
    if mu.is_zero():
        return 0.0
    return mu.bg_index()


def tail_indices_at_infinity(mu: LevyMeasure, a: float = 0.0, b: float = 0.0) -> RegVarTail:
    """Regularly varying tail of the BDLP in the normalised form ``M+(x) ~ p gamma k x^-gamma``, ``p + q = 1``.

    The drift and Gaussian part do not affect the tails; they are accepted for
    a uniform call signature.
    """
    if mu.is_zero():
        raise LightTailError("zero Lévy measure")
    g, cp, cm = mu.tail_at_infinity()
    s = cp + cm
    if s <= 0:
        raise LightTailError("no tail mass at infinity")
    return RegVarTail(g, cp / s, cm / s, SlowlyVarying.constant(s / g))


def pi_regvar(pi: PiSpec):
    """``(alpha, ell)`` with ``pi((0,x]) ~ ell(1/x) x^alpha`` as ``x -> 0``."""
    return pi.alpha, pi.ell


def pi_moment(pi: PiSpec, theta: float) -> float:
    """``int xi^theta pi(d xi)``, possibly ``inf``."""
    return pi.moment(theta)


def correlation(pi: PiSpec, t: float) -> float:
    """Correlation ``r(t) = int exp(-t xi) pi(d xi)`` of the finite-variance components."""
    if t < 0:
        raise ValueError("lag must be non-negative")
    return pi.laplace(t)


def levy_cumulant(quad: CharacteristicQuadruple, zeta):
    """``log E exp(i zeta L(1))``; vectorised over ``zeta``."""
    z = np.asarray(zeta, dtype=float)
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for i, zi in enumerate(flat):
        val = 1j * quad.a * zi - 0.5 * quad.b * zi * zi
        if not quad.mu.is_zero():
            val += quad.mu.jump_cumulant(float(zi))
        if not np.isfinite(val):
            raise QuadratureError(f"non-finite cumulant at zeta={zi}")
        out[i] = val
    return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)


def supou_marginal_cumulant(quad: CharacteristicQuadruple, zeta, tol=1e-12):
    """Cumulant of the stationary marginal ``X(0)``: ``int_0^inf kappa_L(zeta e^{-v}) dv``.

    The range is cut where ``|kappa_L| < tol``; the remainder is closed with the
    local power-law decay of ``kappa_L`` near zero. Independent of ``pi``.
    """
    z = np.asarray(zeta, dtype=float)
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for i, zi in enumerate(flat):
        out[i] = _marginal_one(quad, float(zi), tol)
    return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)


def _marginal_one(quad, zeta, tol):
    if zeta == 0:
        return 0j
    kap = lambda v: levy_cumulant(quad, zeta * math.exp(-v))
    v_end = 1.0
    while abs(kap(v_end)) > tol and v_end < 200:
        v_end += 2.0
    if v_end >= 200:
        raise QuadratureError("cumulant does not vanish at the origin")
    # u = zeta e^{-v}: integrate in log space, which is already v
    kw = dict(epsabs=tol, epsrel=1e-10, limit=400)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda v: kap(v).real, 0.0, v_end, **kw)[0]
        im = integrate.quad(lambda v: kap(v).imag, 0.0, v_end, **kw)[0]
    k1, k0 = kap(v_end), kap(v_end - 1.0)
    rem = 0j
    if abs(k1) > 0 and abs(k0) > 0:
        power = math.log(abs(k0) / abs(k1))
        if power > 0:
            rem = k1 / power
    return complex(re, im) + rem


def integrated_stable_scale(mu: StablePair, pi: PiSpec, T: float) -> float:
    """Exact scale of ``X*(T)`` for a strictly stable BDLP (mean-zero or ``gamma < 1``).

    ``scale^g = s_L^g E_pi[ xi^-g ((1 - e^{-xi T})^g / g + int_0^{xi T} (1 - e^{-w})^g dw) ]``.
    """
    g = mu.gamma
    s_g = mu.stable_law().sigma ** g

    def inner(xi):
        y = xi * T
        tail = (-math.expm1(-y)) ** g / g
        body = integrate.quad(lambda w: (-math.expm1(-w)) ** g, 0.0, y, limit=200)[0]
        return xi ** (-g) * (tail + body)

    if isinstance(pi, GammaPi):
        f = lambda xi: inner(xi) * float(pi.density(xi))
        pts = sorted({1.0 / T, 10.0 / T, 1.0})
        val = sum(integrate.quad(f, lo, hi, limit=400)[0] for lo, hi in zip([0.0] + pts, pts + [np.inf]))
    else:
        xs = np.asarray(pi.x)
        val = integrate.trapezoid([inner(x) * p for x, p in zip(xs, pi.density_values)], xs)
    return (s_g * val) ** (1.0 / g)


def zero_measure() -> LevyMeasure:
    return ZeroMeasure()


__all__ = [
    "CharacteristicQuadruple", "GammaPi", "TabulatedPi", "PiSpec", "SlowlyVarying", "UNBOUNDED_INDEX_ZERO",
    "bg_index", "correlation", "de_bruijn_conjugate", "integrated_stable_scale", "levy_cumulant", "pi_moment",
    "pi_regvar", "supou_marginal_cumulant", "tail_indices_at_infinity", "tail_indices_at_zero", "StablePair",
]

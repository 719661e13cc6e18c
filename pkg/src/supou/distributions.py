"""Stable laws, heavy-tailed jump distributions and domain-of-attraction maps."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from . import kernels
from .slowvar import SlowlyVarying


def chi(gamma: float) -> float:
    """Skewness factor of the stable cumulant: ``tan(pi gamma / 2)``, zero at ``gamma = 1``."""
    return 0.0 if gamma == 1.0 else math.tan(0.5 * math.pi * gamma)


@dataclass(frozen=True)
class StableLaw:
    """S_gamma(sigma, rho, c): index ``gamma``, scale ``sigma``, skewness ``rho``, location ``c``."""

    gamma: float
    sigma: float
    rho: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.gamma < 2.0:
            raise ValueError(f"stability index must lie in (0, 2), got {self.gamma}")
        if not self.sigma > 0.0:
            raise ValueError(f"scale must be positive, got {self.sigma}")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"skewness must lie in [-1, 1], got {self.rho}")
        if self.gamma == 1.0 and self.rho != 0.0:
            raise ValueError("gamma = 1 requires a symmetric law (rho = 0)")

    def cumulant(self, zeta):
        return stable_cumulant(self, zeta)

    def sample(self, rng, size=None):
        return stable_sample(self, rng, size)

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "sigma": self.sigma, "rho": self.rho, "c": self.c}


def stable_cumulant(law: StableLaw, zeta):
    """``log E exp(i zeta Z)`` for ``Z ~ law``; vectorised over ``zeta``."""
    z = np.asarray(zeta, dtype=float)
    az = np.abs(z)
    out = 1j * law.c * z - law.sigma ** law.gamma * az ** law.gamma * (
        1.0 - 1j * law.rho * np.sign(z) * chi(law.gamma))
    return complex(out) if out.ndim == 0 else out


def stable_sample(law: StableLaw, rng: np.random.Generator, size=None):
    """Exact draws by the Chambers-Mallows-Stuck construction."""
    shape = () if size is None else size
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size=shape)
    w = rng.standard_exponential(size=shape)
    z = kernels.cms_transform_numpy(np.atleast_1d(v), np.atleast_1d(w), law.gamma, law.rho)
    x = law.sigma * z + law.c
    return float(x[0]) if size is None else x.reshape(shape)


@dataclass(frozen=True)
class RegVarTail:
    """Balanced regularly varying tails ``P(X > x) ~ p k(x) x^-gamma``, ``P(X <= -x) ~ q k(x) x^-gamma``."""

    gamma: float
    p: float
    q: float
    k: SlowlyVarying = field(default_factory=lambda: SlowlyVarying.constant(1.0))

    def __post_init__(self):
        if not 0.0 < self.gamma < 2.0:
            raise ValueError(f"tail index must lie in (0, 2), got {self.gamma}")
        if self.p < 0 or self.q < 0:
            raise ValueError("tail weights must be non-negative")
        if self.gamma == 1.0 and not math.isclose(self.p, self.q):
            raise ValueError("gamma = 1 requires balanced weights p = q")

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "p": self.p, "q": self.q, "k": self.k.to_dict()}


class DegenerateTailError(ValueError):
    pass


def _doa_factor(gamma: float) -> float:
    """``Gamma(2-g)/(1-g) cos(pi g/2)``, continuous through ``g = 1`` where it equals pi/2."""
    if abs(gamma - 1.0) < 1e-9:
        return 0.5 * math.pi
    return special.gamma(2.0 - gamma) / (1.0 - gamma) * math.cos(0.5 * math.pi * gamma)


def doa_params(tail: RegVarTail) -> tuple[float, float]:
    """Scale and skewness of the stable law attracting ``tail``.

    At ``gamma = 1`` the continuous limit of the scale expression is used.
    """
    s = tail.p + tail.q
    if s <= 0:
        raise DegenerateTailError("p + q must be positive")
    sigma = (_doa_factor(tail.gamma) * s) ** (1.0 / tail.gamma)
    return sigma, (tail.p - tail.q) / s


def bdlp_scale_from_marginal(sigma_x: float, gamma: float) -> float:
    """Scale of L(1) that yields stationary marginal scale ``sigma_x``."""
    if sigma_x <= 0 or not 0 < gamma < 2:
        raise ValueError("need sigma_x > 0 and gamma in (0, 2)")
    return gamma ** (1.0 / gamma) * sigma_x


# ---------------------------------------------------------------- jump laws
#
# Regions are magnitude windows ``lo < |x| <= hi``; ``side`` is +1, -1 or 0 (both).


def power_fourier_part(zeta, gamma, lo, hi):
    """``(R, S)`` with ``int_lo^hi (e^{i zeta y} - 1) y^{-gamma-1} dy = R + i S`` for ``0 < lo < hi <= inf``.

    Evaluated in ``u = |zeta| y``: a log-substituted quadrature below ``u = 1``
    and Fourier-weighted quadrature above, so small ``zeta`` loses no digits.
    """
    az = abs(zeta)
    if az == 0 or hi <= lo:
        return 0.0, 0.0
    a, b = az * lo, az * hi
    g = gamma
    re = im = 0.0
    kw = dict(epsabs=1e-13, epsrel=1e-11, limit=400)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        top = min(b, 1.0)
        if top > a:
            # u = e^s, du = u ds
            re += integrate.quad(lambda t: -2.0 * math.sin(0.5 * math.exp(t)) ** 2 * math.exp(-g * t),
                                 math.log(a), math.log(top), **kw)[0]
            im += integrate.quad(lambda t: math.sin(math.exp(t)) * math.exp(-g * t),
                                 math.log(a), math.log(top), **kw)[0]
        bot = max(a, 1.0)
        if b > bot:
            dens = lambda u: u ** (-g - 1.0)
            if math.isinf(b):
                cp = integrate.quad(dens, bot, np.inf, weight="cos", wvar=1.0, limlst=200)[0]
                sp = integrate.quad(dens, bot, np.inf, weight="sin", wvar=1.0, limlst=200)[0]
                mass = bot ** (-g) / g
            else:
                cp = integrate.quad(dens, bot, b, weight="cos", wvar=1.0, **kw)[0]
                sp = integrate.quad(dens, bot, b, weight="sin", wvar=1.0, **kw)[0]
                mass = (bot ** (-g) - b ** (-g)) / g
            re += cp - mass
            im += sp
    scale = az ** g
    return scale * re, scale * im * math.copysign(1.0, zeta)


def _interval_overlap(a, b, c, d):
    lo, hi = max(a, c), min(b, d)
    return (lo, hi) if hi > lo else None


class JumpDist:
    """Base class for compound-Poisson jump laws."""

    tail_index: float | None = None

    def prob(self, lo=0.0, hi=math.inf):
        return self.abs_moment(0.0, lo, hi)

    def cf_minus_prob(self, zeta, lo=0.0, hi=math.inf):
        return self.cf_part(zeta, lo, hi) - self.prob(lo, hi)

    def mean(self, lo=0.0, hi=math.inf):
        return self.abs_moment(1.0, lo, hi, side=1) - self.abs_moment(1.0, lo, hi, side=-1)

    def tail_coefficients(self):
        """``(c_plus, c_minus)`` with ``P(J > x) ~ c_plus x^-g``; ``None`` for light tails."""
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class TwoSidedPareto(JumpDist):
    """``P(J > x) = p (x/cutoff)^-gamma``, ``P(J < -x) = q (x/cutoff)^-gamma`` for ``x >= cutoff``.

    ``p`` and ``q`` are normalised to sum to one.
    """

    gamma: float
    p: float = 0.5
    q: float = 0.5
    cutoff: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.gamma < 2.0:
            raise ValueError("Pareto index must lie in (0, 2)")
        if self.p < 0 or self.q < 0 or self.p + self.q <= 0:
            raise ValueError("need p, q >= 0 with p + q > 0")
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        s = self.p + self.q
        object.__setattr__(self, "p", self.p / s)
        object.__setattr__(self, "q", self.q / s)

    @property
    def tail_index(self):
        return self.gamma

    def tail_coefficients(self):
        cg = self.cutoff ** self.gamma
        return self.p * cg, self.q * cg

    def _weight(self, side):
        return {1: self.p, -1: self.q, 0: 1.0}[side]

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        lo = max(lo, self.cutoff)
        if hi <= lo:
            return 0.0
        g, c = self.gamma, self.cutoff
        e = r - g
        if e >= 0 and math.isinf(hi):
            return math.inf
        if e == 0:
            val = g * c ** g * math.log(hi / lo)
        else:
            hi_term = 0.0 if math.isinf(hi) else hi ** e
            val = g * c ** g * (hi_term - lo ** e) / e
        return self._weight(side) * val

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        lo = max(lo, self.cutoff)
        g = self.gamma
        frac = 0.0 if math.isinf(hi) else (hi / lo) ** (-g)
        u = rng.random(size)
        mag = lo * (1.0 - u * (1.0 - frac)) ** (-1.0 / g)
        sign = np.where(rng.random(size) < self.p, 1.0, -1.0)
        return sign * mag

    def cf_minus_prob(self, zeta, lo=0.0, hi=math.inf):
        """``E[exp(i zeta J) - 1; lo < |J| <= hi]``, free of cancellation at small ``zeta``."""
        lo = max(lo, self.cutoff)
        if hi <= lo or zeta == 0:
            return 0j
        g, c = self.gamma, self.cutoff
        r, s = power_fourier_part(zeta, g, lo, hi)
        return g * c ** g * complex(r, (self.p - self.q) * s)

    def cf_part(self, zeta, lo=0.0, hi=math.inf):
        """``E[exp(i zeta J); lo < |J| <= hi]``."""
        return self.prob(lo, hi) + self.cf_minus_prob(zeta, lo, hi)

    def to_dict(self):
        return {"kind": "pareto", "gamma": self.gamma, "p": self.p, "q": self.q, "cutoff": self.cutoff}


@dataclass(frozen=True)
class UniformJumps(JumpDist):
    """Jumps uniform on ``[low, high]`` (bounded support, light tails)."""

    low: float = -1.0
    high: float = 1.0

    def __post_init__(self):
        if not self.high > self.low:
            raise ValueError("need high > low")

    def _pieces(self, lo, hi, side):
        out = []
        if side in (0, 1):
            ov = _interval_overlap(lo, hi, self.low, self.high)
            if ov:
                out.append(ov)
        if side in (0, -1):
            ov = _interval_overlap(-hi, -lo, self.low, self.high)
            if ov:
                out.append(ov)
        return out

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        width = self.high - self.low
        tot = 0.0
        for a, b in self._pieces(lo, hi, side):
            if a >= 0:
                tot += (b ** (r + 1) - a ** (r + 1)) / (r + 1)
            else:
                tot += ((-a) ** (r + 1) - (-b) ** (r + 1)) / (r + 1)
        return tot / width

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        pieces = self._pieces(lo, hi, 0)
        if not pieces:
            raise ValueError("empty jump region")
        lens = np.array([b - a for a, b in pieces])
        idx = rng.choice(len(pieces), size=size, p=lens / lens.sum())
        starts = np.array([a for a, _ in pieces])
        return starts[idx] + rng.random(size) * lens[idx]

    def cf_part(self, zeta, lo=0.0, hi=math.inf):
        width = self.high - self.low
        tot = 0j
        for a, b in self._pieces(lo, hi, 0):
            if zeta == 0:
                tot += b - a
            else:
                tot += (np.exp(1j * zeta * b) - np.exp(1j * zeta * a)) / (1j * zeta)
        return complex(tot / width)

    def to_dict(self):
        return {"kind": "uniform", "low": self.low, "high": self.high}


@dataclass(frozen=True)
class PointMasses(JumpDist):
    """Finitely many jump sizes with probabilities ``weights``."""

    values: tuple
    weights: tuple

    def __post_init__(self):
        v = tuple(float(x) for x in self.values)
        w = np.asarray(self.weights, dtype=float)
        if len(v) != len(w) or len(v) == 0:
            raise ValueError("values and weights must be non-empty and of equal length")
        if np.any(w < 0) or w.sum() <= 0:
            raise ValueError("weights must be non-negative with positive total")
        if any(x == 0.0 for x in v):
            raise ValueError("a zero jump carries no information; drop it")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", tuple(w / w.sum()))

    def _mask(self, lo, hi, side):
        v = np.asarray(self.values)
        m = (np.abs(v) > lo) & (np.abs(v) <= hi)
        if side:
            m &= np.sign(v) == side
        return m

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        m = self._mask(lo, hi, side)
        v = np.abs(np.asarray(self.values))[m]
        return float(np.sum(np.asarray(self.weights)[m] * v ** r))

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        m = self._mask(lo, hi, 0)
        if not m.any():
            raise ValueError("empty jump region")
        w = np.asarray(self.weights)[m]
        return rng.choice(np.asarray(self.values)[m], size=size, p=w / w.sum())

    def cf_part(self, zeta, lo=0.0, hi=math.inf):
        m = self._mask(lo, hi, 0)
        v = np.asarray(self.values)[m]
        return complex(np.sum(np.asarray(self.weights)[m] * np.exp(1j * zeta * v)))

    def to_dict(self):
        return {"kind": "points", "values": list(self.values), "weights": list(self.weights)}


def jump_dist_from_dict(d: dict) -> JumpDist:
    kind = d.get("kind")
    if kind == "pareto":
        return TwoSidedPareto(float(d["gamma"]), float(d.get("p", 0.5)), float(d.get("q", 0.5)),
                              float(d.get("cutoff", 1.0)))
    if kind == "uniform":
        return UniformJumps(float(d["low"]), float(d["high"]))
    if kind == "points":
        return PointMasses(tuple(d["values"]), tuple(d["weights"]))
    raise ValueError(f"unknown jump distribution kind {kind!r}")

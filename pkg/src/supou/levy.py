"""Parametric Lévy measures of the background driving Lévy process.

Every measure exposes the same surface:

* ``tail(x, side)``: ``mu((x, inf))`` for ``side=1``, ``mu((-inf, -x))`` for ``side=-1``;
* ``abs_moment(r, lo, hi, side)``: ``int |x|^r mu(dx)`` over ``lo < |x| <= hi``;
* ``jump_cumulant(zeta, lo, hi)``: ``int (e^{i zeta x} - 1 - i zeta x 1{|x|<=1}) mu(dx)`` over the same window;
* ``sample(rng, size, lo, hi)``: jump sizes from the normalised restriction (``lo > 0``);
* asymptotic descriptors at zero and at infinity.
"""
from __future__ import annotations

import math
import warnings
from functools import lru_cache

import numpy as np
from scipy import integrate, special, stats

from .distributions import JumpDist, StableLaw, jump_dist_from_dict, power_fourier_part, stable_cumulant
from .tabulated import TailTable

UNBOUNDED_INDEX_ZERO = "unbounded-index-zero"

_QUAD = dict(epsabs=1e-12, epsrel=1e-10, limit=400)


class LightTailError(ValueError):
    """The measure has no regularly varying tail at infinity."""


class QuadratureError(RuntimeError):
    pass


class LevyMeasure:
    kind = "abstract"
    finite = False

    def total_mass(self, lo=0.0, hi=math.inf):
        return self.abs_moment(0.0, lo, hi, 0)

    def is_zero(self) -> bool:
        return False

    def restrict(self, lo=0.0, hi=math.inf) -> "LevyMeasure":
        return Restricted(self, lo, hi)

    def bg_index(self) -> float:
        t = self.tail_at_zero()
        return 0.0 if t == UNBOUNDED_INDEX_ZERO else t[0]

    def tail_at_infinity(self):
        """``(gamma, C+, C-)`` with ``M+-(x) ~ C+- x^-gamma`` as ``x -> inf``."""
        raise LightTailError(f"{self.kind} measure has no heavy tail")

    def mean_outside_unit(self) -> float:
        """``int_{|x|>1} x mu(dx)`` (may be infinite)."""
        return self.abs_moment(1.0, 1.0, math.inf, 1) - self.abs_moment(1.0, 1.0, math.inf, -1)

    def region(self):
        return 0.0, math.inf


class ZeroMeasure(LevyMeasure):
    kind = "zero"
    finite = True

    def tail(self, x, side=1):
        return 0.0

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        return 0.0

    def jump_cumulant(self, zeta, lo=0.0, hi=math.inf):
        return 0j

    def is_zero(self):
        return True

    def tail_at_zero(self):
        return 0.0, 0.0, 0.0

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        raise ValueError("zero measure has no jumps")

    def to_dict(self):
        return {"kind": "zero"}


class CompoundPoisson(LevyMeasure):
    """``mu = rate * F`` for a jump law ``F``."""

    kind = "compound_poisson"
    finite = True

    def __init__(self, rate: float, jumps: JumpDist):
        if rate < 0 or not math.isfinite(rate):
            raise ValueError("compound Poisson rate must be finite and non-negative")
        self.rate = float(rate)
        self.jumps = jumps

    def is_zero(self):
        return self.rate == 0.0

    def tail(self, x, side=1):
        return self.rate * self.jumps.abs_moment(0.0, x, math.inf, side)

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        if self.rate == 0.0:
            return 0.0
        return self.rate * self.jumps.abs_moment(r, lo, hi, side)

    def jump_cumulant(self, zeta, lo=0.0, hi=math.inf):
        if self.rate == 0.0 or zeta == 0:
            return 0j
        val = self.jumps.cf_minus_prob(zeta, lo, hi)
        comp = self.jumps.mean(lo, min(hi, 1.0)) if lo < 1.0 else 0.0
        return self.rate * (val - 1j * zeta * comp)

    def tail_at_zero(self):
        return 0.0, 0.0, 0.0

    def tail_at_infinity(self):
        tc = self.jumps.tail_coefficients()
        if tc is None or self.rate == 0.0:
            raise LightTailError("compound Poisson jumps are light-tailed")
        return self.jumps.tail_index, self.rate * tc[0], self.rate * tc[1]

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        return self.jumps.sample(rng, size, lo, hi)

    def to_dict(self):
        return {"kind": "compound_poisson", "rate": self.rate, "jumps": self.jumps.to_dict()}


# ------------------------------------------------------------------ stable


def _power_small_part(zeta, c, gamma, lo, hi):
    """``int_lo^hi (cos(zx) - 1, sin(zx) - zx) c x^{-g-1} dx`` for ``0 <= lo < hi <= 1``."""
    z = zeta

    def fc(x):
        y = 0.5 * z * x
        if abs(y) < 1e-4:
            return -0.5 * z * z * (1.0 - y * y / 3.0)
        return -2.0 * math.sin(y) ** 2 / (x * x)

    def fs(x):
        y = z * x
        if abs(y) < 1e-3:
            return -z ** 3 / 6.0 * (1.0 - y * y / 20.0)
        return (math.sin(y) - y) / x ** 3

    if lo == 0.0:
        re = integrate.quad(fc, 0.0, hi, weight="alg", wvar=(1.0 - gamma, 0.0), **_QUAD)[0]
        im = integrate.quad(fs, 0.0, hi, weight="alg", wvar=(2.0 - gamma, 0.0), **_QUAD)[0]
    else:
        re = integrate.quad(lambda x: fc(x) * x ** (1.0 - gamma), lo, hi, **_QUAD)[0]
        im = integrate.quad(lambda x: fs(x) * x ** (2.0 - gamma), lo, hi, **_QUAD)[0]
    return c * re, c * im


def _power_big_part(zeta, c, gamma, lo, hi):
    """``int_lo^hi (cos(zx) - 1, sin(zx)) c x^{-g-1} dx`` for ``1 <= lo < hi <= inf``."""
    r, i = power_fourier_part(zeta, gamma, lo, hi)
    return c * r, c * i


class StablePair(LevyMeasure):
    """Density ``c1 x^{-g-1}`` on ``(0, inf)`` and ``c2 |x|^{-g-1}`` on ``(-inf, 0)``."""

    kind = "stable"

    def __init__(self, c1: float, c2: float, gamma: float):
        if c1 < 0 or c2 < 0 or c1 + c2 <= 0:
            raise ValueError("need c1, c2 >= 0 with c1 + c2 > 0")
        if not 0 < gamma < 2:
            raise ValueError("stable index must lie in (0, 2)")
        if gamma == 1.0 and not math.isclose(c1, c2):
            raise ValueError("gamma = 1 requires c1 = c2")
        self.c1, self.c2, self.gamma = float(c1), float(c2), float(gamma)

    @classmethod
    def from_law(cls, sigma: float, rho: float, gamma: float) -> "StablePair":
        """The pair whose strictly stable part has scale ``sigma`` and skewness ``rho``."""
        total = sigma ** gamma / cls._scale_factor(gamma)
        return cls(0.5 * total * (1 + rho), 0.5 * total * (1 - rho), gamma)

    @staticmethod
    def _scale_factor(gamma):
        """``sigma^g / (c1 + c2)``."""
        if gamma == 1.0:
            return 0.5 * math.pi
        return special.gamma(2.0 - gamma) * math.cos(0.5 * math.pi * gamma) / (gamma * (1.0 - gamma))

    def stable_law(self) -> StableLaw:
        """Strictly stable law of the pure-jump part (compensation convention aside)."""
        s = self.c1 + self.c2
        return StableLaw(self.gamma, (self._scale_factor(self.gamma) * s) ** (1.0 / self.gamma),
                         (self.c1 - self.c2) / s, 0.0)

    def compensation_drift(self) -> float:
        """``d`` with ``jump_cumulant(z) = stable_cumulant(z) + i z d``."""
        if self.gamma == 1.0:
            return 0.0
        return (self.c1 - self.c2) / (self.gamma - 1.0)

    def _c(self, side):
        return self.c1 if side == 1 else self.c2

    def tail(self, x, side=1):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            out = self._c(side) / self.gamma * x ** (-self.gamma)
        return out if out.ndim else float(out)

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        if side == 0:
            return self.abs_moment(r, lo, hi, 1) + self.abs_moment(r, lo, hi, -1)
        c = self._c(side)
        if c == 0 or hi <= lo:
            return 0.0
        e = r - self.gamma
        if (lo == 0 and e <= 0) or (math.isinf(hi) and e >= 0):
            return math.inf
        if e == 0:
            return c * math.log(hi / lo)
        hi_t = 0.0 if math.isinf(hi) else hi ** e
        lo_t = 0.0 if lo == 0 else lo ** e
        return c * (hi_t - lo_t) / e

    def jump_cumulant(self, zeta, lo=0.0, hi=math.inf):
        if zeta == 0 or hi <= lo:
            return 0j
        if lo == 0.0 and math.isinf(hi):
            return stable_cumulant(self.stable_law(), zeta) + 1j * zeta * self.compensation_drift()
        re = im = 0.0
        s_lo, s_hi = lo, min(hi, 1.0)
        b_lo, b_hi = max(lo, 1.0), hi
        for side, c in ((1, self.c1), (-1, self.c2)):
            if c == 0:
                continue
            if s_hi > s_lo:
                r_, i_ = _power_small_part(zeta, c, self.gamma, s_lo, s_hi)
                re += r_
                im += side * i_
            if b_hi > b_lo:
                r_, i_ = _power_big_part(zeta, c, self.gamma, b_lo, b_hi)
                re += r_
                im += side * i_
        return complex(re, im)

    def tail_at_zero(self):
        return self.gamma, self.c1 / self.gamma, self.c2 / self.gamma

    def tail_at_infinity(self):
        return self.gamma, self.c1 / self.gamma, self.c2 / self.gamma

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        if lo <= 0:
            raise ValueError("stable jumps can only be sampled above a positive cutoff")
        g = self.gamma
        mp, mm = self.abs_moment(0, lo, hi, 1), self.abs_moment(0, lo, hi, -1)
        sign = np.where(rng.random(size) * (mp + mm) < mp, 1.0, -1.0)
        frac = 0.0 if math.isinf(hi) else (hi / lo) ** (-g)
        mag = lo * (1.0 - rng.random(size) * (1.0 - frac)) ** (-1.0 / g)
        return sign * mag

    def to_dict(self):
        return {"kind": "stable", "c1": self.c1, "c2": self.c2, "gamma": self.gamma}


# ------------------------------------------------------------------ tabulated


class TabulatedLevy(LevyMeasure):
    """Shared machinery for measures given by a tail table plus a closed-form cumulant."""

    def __init__(self):
        self._table = None

    @property
    def table(self) -> TailTable:
        if self._table is None:
            self._table = self._build_table()
        return self._table

    def tail(self, x, side=1):
        return self.table.tail(x, side)

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        return self.table.abs_moment(r, lo, hi, side)

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        if lo <= 0:
            raise ValueError("jumps can only be sampled above a positive cutoff")
        return self.table.sample(rng, size, lo, hi)

    def region_cumulant(self, zeta, lo, hi):
        """Cumulant over ``lo < |x| <= hi`` by parts against the tabulated tails."""
        z = zeta
        az = abs(z)
        sz = math.copysign(1.0, z)
        kw = dict(epsabs=1e-11, epsrel=1e-9, limit=400)
        re = im = 0.0
        for side in (1, -1):
            if self.table.lm[side] is None:
                continue
            M = lambda x, s=side: float(self.table.tail(x, s))
            r_s = i_s = 0.0
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                a, b = lo, min(hi, 1.0)
                if b > a:
                    # f = (cos zx - 1, sin zx - zx) on (0, 1]
                    r_s += integrate.quad(lambda x: -z * math.sin(z * x) * M(x), a, b, **kw)[0]
                    i_s += integrate.quad(lambda x: z * (math.cos(z * x) - 1.0) * M(x), a, b, **kw)[0]
                    r_s -= (math.cos(z * b) - 1.0) * M(b)
                    i_s -= (math.sin(z * b) - z * b) * M(b)
                    if a > 0:
                        r_s += (math.cos(z * a) - 1.0) * M(a)
                        i_s += (math.sin(z * a) - z * a) * M(a)
                a, b = max(lo, 1.0), hi
                if b > a:
                    # f = (cos zx - 1, sin zx) above 1
                    if math.isinf(b):
                        sp = integrate.quad(M, a, np.inf, weight="sin", wvar=az, limlst=200)[0]
                        cp = integrate.quad(M, a, np.inf, weight="cos", wvar=az, limlst=200)[0]
                    else:
                        sp = integrate.quad(M, a, b, weight="sin", wvar=az, **kw)[0]
                        cp = integrate.quad(M, a, b, weight="cos", wvar=az, **kw)[0]
                        r_s -= (math.cos(z * b) - 1.0) * M(b)
                        i_s -= math.sin(z * b) * M(b)
                    r_s += -az * sp
                    i_s += z * cp
                    r_s += (math.cos(z * a) - 1.0) * M(a)
                    i_s += math.sin(z * a) * M(a)
            re += r_s
            im += side * i_s
        return complex(re, im)

    def jump_cumulant(self, zeta, lo=0.0, hi=math.inf):
        if zeta == 0 or hi <= lo:
            return 0j
        if lo == 0.0 and math.isinf(hi):
            return self.full_jump_cumulant(zeta)
        return self.region_cumulant(zeta, lo, hi)


def _bessel_weight(u, delta, nu):
    """``1 / (J_nu^2 + Y_nu^2)(delta u)``."""
    z = delta * u
    j = special.jv(nu, z)
    y = special.yv(nu, z)
    return 1.0 / (j * j + y * y)


@lru_cache(maxsize=32)
def _student_table(delta, gamma):
    nu = 0.5 * gamma
    x = np.logspace(-8, 8, 321)
    # integrate over t = log u on a uniform grid; the integrand decays
    # like u^gamma at the bottom and doubly exponentially at the top
    t_lo = max(math.log(1e-17) / gamma - math.log(delta), -700.0)
    t_hi = math.log(60.0 / x[0])
    t = np.linspace(t_lo, t_hi, 12001)
    u = np.exp(t)
    w = _bessel_weight(u, delta, nu)
    dt = t[1] - t[0]
    m = np.empty_like(x)
    for i, xi in enumerate(x):
        f = special.exp1(xi * u) * w
        m[i] = (2.0 / math.pi ** 2) * integrate.trapezoid(f, dx=dt)
    return x, m


class Student(TabulatedLevy):
    """Jump measure of the Lévy process whose unit-time law is Student t with ``gamma`` degrees of freedom.

    The Lévy density is a Bessel-function integral; its tails are tabulated once
    per parameter pair. The location ``c`` is the drift of the triplet.
    """

    kind = "student"

    def __init__(self, delta: float, gamma: float, c: float = 0.0):
        super().__init__()
        if delta <= 0:
            raise ValueError("Student scale must be positive")
        if not 0 < gamma < 2:
            raise ValueError("Student degrees of freedom must lie in (0, 2)")
        if gamma > 1 and c != 0:
            raise ValueError("gamma > 1 requires zero location (mean-zero BDLP)")
        self.delta, self.gamma, self.c = float(delta), float(gamma), float(c)

    def _build_table(self):
        x, m = _student_table(self.delta, self.gamma)
        return TailTable(x, m, m)

    def full_jump_cumulant(self, zeta):
        """Log characteristic function of the centred Student law (symmetric, so no compensation)."""
        nu = 0.5 * self.gamma
        z = self.delta * abs(zeta)
        if z == 0:
            return 0j
        val = (nu * math.log(z) + math.log(special.kve(nu, z)) - z
               + (1.0 - nu) * math.log(2.0) - special.gammaln(nu))
        return complex(val, 0.0)

    def tail_at_zero(self):
        c = self.delta / math.pi
        return 1.0, c, c

    def tail_at_infinity(self):
        g = self.gamma
        c = math.exp(special.gammaln(0.5 * (g + 1)) - special.gammaln(0.5 * g)) * self.delta ** g / (
            math.sqrt(math.pi) * g)
        return g, c, c

    def to_dict(self):
        return {"kind": "student", "delta": self.delta, "gamma": self.gamma, "c": self.c}


_SF_EDGE = 30.0


@lru_cache(maxsize=32)
def _stable_sf_table(gamma, rho):
    """``P(Z > z)`` for the standard strictly stable law on ``0 <= z <= 30``."""
    zs = np.sinh(np.linspace(0.0, np.arcsinh(_SF_EDGE), 301))
    if gamma == 1.0:
        return zs, 0.5 - np.arctan(zs) / math.pi
    sf = stats.levy_stable.sf(zs, gamma, rho)
    return zs, np.clip(sf, 0.0, 1.0)


def _stable_tail_const(gamma, rho):
    """``P(Z > z) ~ C z^-gamma`` for the standard strictly stable law."""
    if gamma == 1.0:
        s = 2.0 / math.pi
    else:
        s = (1.0 - gamma) / (special.gamma(2.0 - gamma) * math.cos(0.5 * math.pi * gamma))
    return 0.5 * s * (1 + rho), 0.5 * s * (1 - rho)


@lru_cache(maxsize=32)
def _right_tail_interp(gamma, rho):
    """Right tail on ``z > 0``: tabulated up to 30, then ``cp z^-g + c2 z^-2g`` matched at the edge.

    The library survival function loses all digits far out in the tail, so it
    is only used where it is reliable.
    """
    zs, sf = _stable_sf_table(gamma, rho)
    cp, _ = _stable_tail_const(gamma, rho)
    edge = zs[-1]
    c2 = (sf[-1] - cp * edge ** -gamma) * edge ** (2 * gamma) if sf[-1] > 0 else 0.0
    az = np.arcsinh(zs)

    def sf_z(z):
        z = np.asarray(z, dtype=float)
        far = np.maximum(z, edge)
        tail = np.maximum(cp * far ** -gamma + c2 * far ** (-2 * gamma), 0.0)
        return np.where(z > edge, tail, np.interp(np.arcsinh(z), az, sf))

    return sf_z


@lru_cache(maxsize=32)
def _geostable_table(gamma, sigma, rho):
    # the left tail of S(rho) is the right tail of S(-rho); each side uses its own right-tail table
    right = _right_tail_interp(gamma, rho)
    left = right if rho == 0.0 else _right_tail_interp(gamma, -rho)
    x = np.logspace(-10, 8, 361)
    t = np.linspace(-80.0, 4.5, 6001)
    g = np.exp(t)
    wt = np.exp(-g)
    scale = sigma * g ** (1.0 / gamma)
    dt = t[1] - t[0]
    mp = np.empty_like(x)
    mm = np.empty_like(x)
    for i, xi in enumerate(x):
        z = xi / scale
        mp[i] = integrate.trapezoid(right(z) * wt, dx=dt)
        mm[i] = mp[i] if left is right else integrate.trapezoid(left(z) * wt, dx=dt)
    mm = np.where(mm < 1e-300, 0.0, mm)
    mp = np.where(mp < 1e-300, 0.0, mp)
    return x, mp, mm


class GeometricStable(TabulatedLevy):
    """Jump measure of the geometric stable Lévy process with ``E e^{izL(1)} = 1/(1 - kappa_S(z))``.

    ``L = S(G)`` with ``G`` a standard gamma subordinator and ``S`` strictly
    stable ``S_gamma(sigma, rho, 0)``; the tails are tabulated from the
    subordination integral.
    """

    kind = "geometric_stable"

    def __init__(self, gamma: float, sigma: float, rho: float = 0.0):
        super().__init__()
        self.law = StableLaw(gamma, sigma, rho, 0.0)
        self.gamma, self.sigma, self.rho = float(gamma), float(sigma), float(rho)
        self._drift = None

    def _build_table(self):
        x, mp, mm = _geostable_table(self.gamma, self.sigma, self.rho)
        if not np.any(mm > 0):
            mm = np.zeros_like(mp)
        if not np.any(mp > 0):
            mp = np.zeros_like(mm)
        # a one-sided law gives an all-zero side; otherwise drop underflowed rows
        keep = np.ones_like(x, dtype=bool)
        for arr in (mp, mm):
            if np.any(arr > 0):
                keep &= arr > 0
        return TailTable(x[keep], mp[keep], mm[keep])

    def natural_drift(self) -> float:
        """Triplet drift ``a`` making ``(a, 0, mu)`` reproduce the geometric stable law."""
        if self._drift is None:
            tb = self.table
            if self.rho == 0.0:
                self._drift = 0.0
            elif self.gamma < 1.0:
                val = 0.0
                for s in (1, -1):
                    val += s * (tb.xpow_integral(0.0, 0.0, 1.0, s) - tb.tail(1.0, s))
                self._drift = val
            else:
                val = 0.0
                for s in (1, -1):
                    val += s * (tb.tail(1.0, s) + tb.xpow_integral(0.0, 1.0, math.inf, s))
                self._drift = -val
        return self._drift

    def full_jump_cumulant(self, zeta):
        return -np.log(1.0 - stable_cumulant(self.law, zeta)) - 1j * zeta * self.natural_drift()

    def tail_at_zero(self):
        return UNBOUNDED_INDEX_ZERO

    def bg_index(self):
        return 0.0

    def tail_at_infinity(self):
        cp, cm = _stable_tail_const(self.gamma, self.rho)
        sg = self.sigma ** self.gamma
        return self.gamma, cp * sg, cm * sg

    def to_dict(self):
        return {"kind": "geometric_stable", "gamma": self.gamma, "sigma": self.sigma, "rho": self.rho}


# ------------------------------------------------------------------ restriction


class Restricted(LevyMeasure):
    """``mu`` restricted to ``lo < |x| <= hi``."""

    def __init__(self, base: LevyMeasure, lo=0.0, hi=math.inf):
        if isinstance(base, Restricted):
            lo, hi = max(lo, base.lo), min(hi, base.hi)
            base = base.base
        self.base, self.lo, self.hi = base, float(lo), float(hi)
        self.kind = f"{base.kind}|({lo:g},{hi:g}]"
        self.finite = base.finite or lo > 0

    def region(self):
        return self.lo, self.hi

    def _clip(self, lo, hi):
        return max(lo, self.lo), min(hi, self.hi)

    def is_zero(self):
        return self.base.is_zero() or self.hi <= self.lo or self.total_mass() == 0.0

    def tail(self, x, side=1):
        lo, hi = self._clip(x, math.inf)
        return self.base.abs_moment(0.0, lo, hi, side) if hi > lo else 0.0

    def abs_moment(self, r, lo=0.0, hi=math.inf, side=0):
        lo, hi = self._clip(lo, hi)
        return self.base.abs_moment(r, lo, hi, side) if hi > lo else 0.0

    def jump_cumulant(self, zeta, lo=0.0, hi=math.inf):
        lo, hi = self._clip(lo, hi)
        return self.base.jump_cumulant(zeta, lo, hi) if hi > lo else 0j

    def sample(self, rng, size, lo=0.0, hi=math.inf):
        lo, hi = self._clip(lo, hi)
        return self.base.sample(rng, size, lo, hi)

    def tail_at_zero(self):
        if self.lo > 0:
            return 0.0, 0.0, 0.0
        return self.base.tail_at_zero()

    def bg_index(self):
        return 0.0 if self.lo > 0 else self.base.bg_index()

    def tail_at_infinity(self):
        if not math.isinf(self.hi):
            raise LightTailError("bounded restriction has no heavy tail")
        return self.base.tail_at_infinity()

    def to_dict(self):
        d = self.base.to_dict()
        d["region"] = [self.lo, None if math.isinf(self.hi) else self.hi]
        return d


def levy_from_dict(d: dict) -> LevyMeasure:
    kind = d.get("kind")
    if kind == "zero":
        mu = ZeroMeasure()
    elif kind == "compound_poisson":
        mu = CompoundPoisson(float(d["rate"]), jump_dist_from_dict(d["jumps"]))
    elif kind == "stable":
        if "sigma" in d:
            mu = StablePair.from_law(float(d["sigma"]), float(d.get("rho", 0.0)), float(d["gamma"]))
        else:
            mu = StablePair(float(d["c1"]), float(d["c2"]), float(d["gamma"]))
    elif kind == "student":
        mu = Student(float(d["delta"]), float(d["gamma"]), float(d.get("c", 0.0)))
    elif kind == "geometric_stable":
        mu = GeometricStable(float(d["gamma"]), float(d["sigma"]), float(d.get("rho", 0.0)))
    else:
        raise ValueError(f"unknown Levy measure kind {kind!r}")
    if "region" in d:
        lo, hi = d["region"]
        mu = Restricted(mu, float(lo), math.inf if hi is None else float(hi))
    return mu

"""Per-component BDLP drivers for a superposition of ``m`` OU processes.

A driver produces, for every OU ``k`` with rate ``xi_k`` and own-time step
``tau_k = xi_k dt``, the stochastic parts of the exact linear update

    X_k(t + dt)  = e^{-tau} X_k(t) + A_k
    X*_k(t + dt) = X*_k(t) + X_k(t) (1 - e^{-tau}) / xi_k + B_k

with ``A = int e^{-u} dL_k`` and ``B = int (1 - e^{-u}) / xi dL_k`` over the
last ``tau`` units of own time. Each OU is driven by ``L`` with cumulant
``kappa_L / m``.
"""
from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..distributions import StableLaw


def f1(tau):
    """``int_0^tau (1 - e^{-u}) du``."""
    tau = np.asarray(tau, dtype=float)
    small = tau < 1e-3
    ts = np.where(small, tau, 0.0)
    series = ts ** 2 / 2 - ts ** 3 / 6 + ts ** 4 / 24
    return np.where(small, series, tau + np.expm1(-tau))


def f2(tau):
    """``int_0^tau (1 - e^{-u})^2 du``."""
    tau = np.asarray(tau, dtype=float)
    small = tau < 1e-2
    ts = np.where(small, tau, 0.0)
    series = np.zeros_like(ts)
    fact = 2.0  # (n+1)! with n = 2 starts at 3! = 6 below
    for n in range(2, 9):
        fact *= n + 1
        series += (-1) ** n * (2.0 ** n - 2.0) * ts ** (n + 1) / fact
    exact = tau + 2.0 * np.expm1(-tau) - 0.5 * np.expm1(-2.0 * tau)
    return np.where(small, series, exact)


class Driver:
    """Zero driver; subclasses add drift, Gaussian, jump or stable parts."""

    name = "zero"

    def __init__(self, m: int, drift: float = 0.0):
        self.m = m
        self.drift = drift  # per unit own time, whole superposition

    def is_zero(self):
        return self.drift == 0.0

    def init(self, xi, rng):
        return np.full(xi.shape, self.drift / self.m)

    def step(self, xi, tau, rng):
        d = self.drift / self.m
        a = d * -np.expm1(-tau)
        b = d * f1(tau) / xi
        return a, b


class GaussianDriver(Driver):
    """Brownian BDLP with variance ``b`` per unit time, exact bivariate normal updates."""

    name = "gaussian"

    def __init__(self, m, b, drift=0.0):
        super().__init__(m, drift)
        self.b = b

    def is_zero(self):
        return self.b == 0.0 and self.drift == 0.0

    def init(self, xi, rng):
        x = super().init(xi, rng)
        if self.b == 0.0:
            return x
        z = rng.standard_normal(xi.shape)
        return x + math.sqrt(0.5 * self.b / self.m) * z

    def step(self, xi, tau, rng):
        a, b = super().step(xi, tau, rng)
        if self.b == 0.0:
            return a, b
        z1 = rng.standard_normal(xi.shape)
        z2 = rng.standard_normal(xi.shape)
        bm = self.b / self.m
        va = -0.5 * bm * np.expm1(-2.0 * tau)
        vb = bm * f2(tau) / xi ** 2
        cov = 0.5 * bm * np.expm1(-tau) ** 2 / xi
        sa = np.sqrt(va)
        safe = np.where(sa > 0, sa, 1.0)
        lam = np.where(sa > 0, cov / safe, 0.0)
        resid = np.sqrt(np.maximum(vb - lam ** 2, 0.0))
        return a + sa * z1, b + lam * z1 + resid * z2


class JumpDriver(GaussianDriver):
    """Compound Poisson jumps from ``mu`` restricted to ``lo < |x| <= hi``, plus optional Gaussian part.

    ``drift`` should already include any compensation of the jumps.
    """

    name = "jumps"

    def __init__(self, m, mu, lo, hi, drift=0.0, b=0.0, rel_tol=1e-8):
        super().__init__(m, b, drift)
        self.mu, self.lo, self.hi = mu, lo, hi
        self.rate = 0.0 if mu.is_zero() else float(mu.abs_moment(0.0, lo, hi, 0))
        if not math.isfinite(self.rate):
            raise ValueError("jump window carries infinite mass; raise the lower cutoff")
        self.v_max = math.log(1.0 / rel_tol)

    def is_zero(self):
        return super().is_zero() and self.rate == 0.0

    def _jumps(self, xi, span, rng):
        m = xi.size
        counts = rng.poisson(self.rate / self.m * span)
        total = int(counts.sum())
        owner = np.repeat(np.arange(m), counts)
        w = np.repeat(span, counts) * rng.random(total)
        x = self.mu.sample(rng, total, self.lo, self.hi) if total else np.zeros(0)
        return owner, w, np.asarray(x, dtype=float)

    def init(self, xi, rng):
        x0 = super().init(xi, rng)
        if self.rate == 0.0:
            return x0
        span = np.full(xi.shape, self.v_max)
        owner, w, x = self._jumps(xi, span, rng)
        a, _ = kernels.cp_accumulate(owner, w, x, xi, xi.size)
        return x0 + a

    def step(self, xi, tau, rng):
        a, b = super().step(xi, tau, rng)
        if self.rate == 0.0:
            return a, b
        owner, w, x = self._jumps(xi, tau, rng)
        ja, jb = kernels.cp_accumulate(owner, w, x, xi, xi.size)
        return a + ja, b + jb


class StableDriver(Driver):
    """Strictly stable BDLP ``S_g(sigma, rho, 0)`` per unit time plus drift.

    The step splits own time into ``n_sub`` pieces (width at most ``h_max``,
    the last one absorbing the remainder). On each piece one stable draw
    carries both integrals with their exact scales, so ``A`` is exact in law
    and ``B`` exact up to a 3-point quadrature of its scale.
    """

    name = "stable"

    def __init__(self, m, law: StableLaw, drift=0.0, n_sub=8, h_max=0.5):
        super().__init__(m, drift)
        if law.c != 0.0:
            raise ValueError("pass the location through the drift")
        self.law, self.n_sub, self.h_max = law, int(n_sub), float(h_max)
        self.unit_scale = law.sigma * m ** (-1.0 / law.gamma)

    def is_zero(self):
        return False

    def _draws(self, shape, rng):
        v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size=shape)
        w = rng.standard_exponential(size=shape)
        return v, w

    def init(self, xi, rng):
        x0 = super().init(xi, rng)
        g = self.law.gamma
        v, w = self._draws(xi.shape, rng)
        z = kernels.cms_transform(v, w, g, self.law.rho)
        return x0 + self.unit_scale * g ** (-1.0 / g) * z

    def step(self, xi, tau, rng):
        a, b = super().step(xi, tau, rng)
        v, w = self._draws((xi.size, self.n_sub), rng)
        sa, sb = kernels.stable_ou_pieces(xi, tau, self.unit_scale, self.law.gamma, self.law.rho, v, w,
                                          self.h_max)
        return a + sa, b + sb

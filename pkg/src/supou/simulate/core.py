"""Finite-superposition path engine for ``X`` and ``X*`` with the three-way Lévy-Itô split."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from .._accel import thread_count
from ..levy import GeometricStable, StablePair, Student, ZeroMeasure
from ..model import CharacteristicQuadruple
from .drivers import Driver, GaussianDriver, JumpDriver, StableDriver

COMPONENTS = ("x1", "x2", "x3")


class UnsupportedBDLP(ValueError):
    pass


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimConfig:
    """Grid, superposition size and ensemble settings.

    ``burn_in`` is ``"stationary"`` (exact or series start) or a non-negative
    time run from the zero state. ``rates`` is ``"stratified"`` (one rate per
    ``1/m`` quantile cell of ``pi``) or ``"iid"``.
    """

    grid: tuple
    m: int = 64
    n_rep: int = 1
    seed: int = 0
    burn_in: object = "stationary"
    small_jump_cutoff: float = 1e-2
    rates: str = "stratified"
    n_sub: int = 8
    h_max: float = 0.5
    rel_tol: float = 1e-8

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or g.size < 1 or g[0] != 0.0:
            raise ValueError("grid must be a 1-d sequence starting at 0")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", tuple(float(x) for x in g))
        if int(self.m) < 1 or int(self.n_rep) < 1:
            raise ValueError("m and n_rep must be positive")
        if not 0 < self.small_jump_cutoff <= 1:
            raise ValueError("small_jump_cutoff must lie in (0, 1]")
        if self.burn_in != "stationary" and not (isinstance(self.burn_in, (int, float)) and self.burn_in >= 0):
            raise ValueError("burn_in must be 'stationary' or a non-negative time")
        if self.rates not in ("stratified", "iid"):
            raise ValueError("rates must be 'stratified' or 'iid'")
        if int(self.n_sub) < 1 or self.h_max <= 0:
            raise ValueError("n_sub must be positive and h_max > 0")

    @property
    def horizon(self) -> float:
        return self.grid[-1]

    @classmethod
    def uniform(cls, horizon: float, step: float, **kw) -> "SimConfig":
        n = max(1, int(round(horizon / step)))
        return cls(grid=tuple(np.linspace(0.0, horizon, n + 1)), **kw)

    def to_dict(self):
        return {"grid": list(self.grid), "m": self.m, "n_rep": self.n_rep, "seed": self.seed,
                "burn_in": self.burn_in, "small_jump_cutoff": self.small_jump_cutoff, "rates": self.rates,
                "n_sub": self.n_sub, "h_max": self.h_max, "rel_tol": self.rel_tol}


@dataclass
class SamplePath:
    grid: np.ndarray
    values: np.ndarray
    integrated: np.ndarray
    method: str = "ou-identity"

    @classmethod
    def zeros(cls, grid):
        g = np.asarray(grid, dtype=float)
        return cls(g, np.zeros_like(g), np.zeros_like(g))


@dataclass
class ComponentPaths:
    x1: SamplePath
    x2: SamplePath
    x3: SamplePath

    def __iter__(self):
        return iter((self.x1, self.x2, self.x3))

    @property
    def total(self) -> SamplePath:
        vals = self.x1.values + self.x2.values + self.x3.values
        integ = self.x1.integrated + self.x2.integrated + self.x3.integrated
        return SamplePath(self.x1.grid, vals, integ)


@dataclass
class PathEnsemble:
    config: SimConfig
    replications: list
    seeds: list
    failures: list = field(default_factory=list)

    def values(self, component="total"):
        """``(n_rep, n_grid)`` array of ``X`` for one component; failed replications are dropped."""
        return np.array([_pick(r, component).values for r in self.replications if r is not None])

    def integrated(self, component="total"):
        return np.array([_pick(r, component).integrated for r in self.replications if r is not None])


def _pick(paths, component):
    return paths.total if component == "total" else getattr(paths, component)


# ------------------------------------------------------------------ split


def levy_ito_split(quad: CharacteristicQuadruple):
    """``(a, 0, mu 1{|x|>1}, pi)``, ``(0, 0, mu 1{|x|<=1}, pi)``, ``(0, b, 0, pi)``."""
    mu = quad.mu
    if mu.is_zero():
        big = small = ZeroMeasure()
    else:
        big, small = mu.restrict(1.0, math.inf), mu.restrict(0.0, 1.0)
    return (CharacteristicQuadruple(quad.a, 0.0, big, quad.pi),
            CharacteristicQuadruple(0.0, 0.0, small, quad.pi),
            CharacteristicQuadruple(0.0, quad.b, ZeroMeasure(), quad.pi))


def _signed_mean(mu, lo, hi):
    return mu.abs_moment(1.0, lo, hi, 1) - mu.abs_moment(1.0, lo, hi, -1)


def build_drivers(quad: CharacteristicQuadruple, config: SimConfig):
    """One driver per Lévy-Itô component.

    Stable measures are simulated as a single strictly stable driver carried
    by ``x1`` (``x2`` is then zero); the sum is unaffected.
    """
    m, mu, eps = config.m, quad.mu, config.small_jump_cutoff
    d3 = GaussianDriver(m, quad.b)
    if mu.is_zero():
        return Driver(m, quad.a), Driver(m), d3
    if isinstance(mu, StablePair):
        d1 = StableDriver(m, mu.stable_law(), quad.a + mu.compensation_drift(), config.n_sub, config.h_max)
        return d1, Driver(m), d3
    d1 = JumpDriver(m, mu, 1.0, math.inf, drift=quad.a, rel_tol=config.rel_tol)
    if mu.finite:
        d2 = JumpDriver(m, mu, 0.0, 1.0, drift=-_signed_mean(mu, 0.0, 1.0), rel_tol=config.rel_tol)
    elif isinstance(mu, (Student, GeometricStable)):
        var = mu.abs_moment(2.0, 0.0, eps, 0)
        d2 = JumpDriver(m, mu, eps, 1.0, drift=-_signed_mean(mu, eps, 1.0), b=var, rel_tol=config.rel_tol)
    else:
        raise UnsupportedBDLP(f"no simulation route for {mu.kind}")
    return d1, d2, d3


# ------------------------------------------------------------------ single OU


def _single_driver(quad: CharacteristicQuadruple):
    mu = quad.mu
    if isinstance(mu, (Student, GeometricStable)):
        raise UnsupportedBDLP(f"{mu.kind} BDLP has no exact OU transition; use simulate_supou")
    if mu.is_zero():
        return GaussianDriver(1, quad.b, quad.a)
    if isinstance(mu, StablePair):
        if quad.b:
            raise UnsupportedBDLP("stable plus Gaussian BDLP: simulate the components separately")
        return StableDriver(1, mu.stable_law(), quad.a + mu.compensation_drift(), n_sub=1, h_max=math.inf)
    if mu.finite:
        comp = _signed_mean(mu, 0.0, 1.0)
        return JumpDriver(1, mu, 0.0, math.inf, drift=quad.a - comp, b=quad.b)
    raise UnsupportedBDLP(f"no exact transition for {mu.kind}")


def ou_exact_step(xi: float, state: float, dt: float, bdlp: CharacteristicQuadruple, rng) -> float:
    """Exact transition ``X(dt) = e^{-xi dt} X(0) + int e^{-xi(dt-s)} dL(xi s)`` of one OU."""
    drv = _single_driver(bdlp)
    x = np.array([float(xi)])
    a, _ = drv.step(x, x * dt, rng)
    return float(math.exp(-xi * dt) * state + a[0])


def stationary_init(xi: float, bdlp: CharacteristicQuadruple, rng, rel_tol: float = 1e-8) -> float:
    """Draw from the stationary law of one OU (exact for Gaussian/stable, shot-noise series for CP)."""
    drv = _single_driver(bdlp)
    if isinstance(drv, JumpDriver):
        drv.v_max = math.log(1.0 / rel_tol)
    return float(drv.init(np.array([float(xi)]), rng)[0])


# ------------------------------------------------------------------ integration


def integrate_path(grid, values):
    """Trapezoid running integral of ``values`` over ``grid`` (``integrated[0] = 0``)."""
    g = np.asarray(grid, dtype=float)
    v = np.asarray(values, dtype=float)
    out = np.zeros_like(g)
    if g.size > 1:
        out[1:] = np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(g))
    return out


def integrate_ou_identity(x0, xt, dl, xi):
    """``X*(t) = (X(0) - X(t) + L(xi t)) / xi`` for one OU with driver increment ``dl``."""
    return (np.asarray(x0) - np.asarray(xt) + np.asarray(dl)) / np.asarray(xi)


# ------------------------------------------------------------------ superposition


def sample_rates(pi, m, rng, scheme="stratified"):
    if scheme == "stratified":
        u = (np.arange(m) + rng.random(m)) / m
    else:
        u = rng.random(m)
    xi = np.asarray(pi.quantile(u), dtype=float)
    return np.maximum(xi, np.finfo(float).tiny)


def _run_component(driver, pi, config, rng):
    grid = np.asarray(config.grid)
    if driver.is_zero():
        return SamplePath.zeros(grid)
    xi = sample_rates(pi, config.m, rng, config.rates)
    if config.burn_in == "stationary":
        x = driver.init(xi, rng)
    else:
        x = np.zeros(config.m)
        if config.burn_in > 0:
            tau = xi * float(config.burn_in)
            a, _ = driver.step(xi, tau, rng)
            x = np.exp(-tau) * x + a
    vals = np.empty(grid.size)
    integ = np.zeros(grid.size)
    vals[0] = x.sum()
    for i, dt in enumerate(np.diff(grid), start=1):
        tau = xi * dt
        a, b = driver.step(xi, tau, rng)
        integ[i] = integ[i - 1] + np.sum(x * -np.expm1(-tau) / xi + b)
        x = np.exp(-tau) * x + a
        vals[i] = x.sum()
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(integ))):
        raise SimulationError("non-finite path values")
    return SamplePath(grid, vals, integ)


def simulate_supou(quad: CharacteristicQuadruple, config: SimConfig, rng, drivers=None) -> ComponentPaths:
    """One replication of ``(X1, X2, X3)`` on ``config.grid``.

    ``rng`` is a ``SeedSequence`` or a ``Generator``; each component draws
    from its own child stream.
    """
    seq = rng if isinstance(rng, np.random.SeedSequence) else rng.bit_generator.seed_seq
    children = seq.spawn(3) if not isinstance(rng, np.random.SeedSequence) else [
        np.random.SeedSequence(seq.entropy, spawn_key=tuple(seq.spawn_key) + (c,)) for c in range(3)]
    if drivers is None:
        drivers = build_drivers(quad, config)
    paths = [_run_component(d, quad.pi, config, np.random.Generator(np.random.PCG64(s)))
             for d, s in zip(drivers, children)]
    return ComponentPaths(*paths)


def replication_seed(master: int, r: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master), spawn_key=(int(r),))


def run_ensemble(quad: CharacteristicQuadruple, config: SimConfig, threads: int | None = None) -> PathEnsemble:
    """``config.n_rep`` replications; replication ``r`` depends only on ``(config.seed, r)``."""
    threads = thread_count() if threads is None else max(1, int(threads))
    n = int(config.n_rep)
    seeds = [replication_seed(config.seed, r) for r in range(n)]
    results = [None] * n
    failures = []
    # drivers hold only parameters, so one set serves every replication
    drivers = build_drivers(quad, config)

    def one(r):
        try:
            return r, simulate_supou(quad, config, seeds[r], drivers), None
        except Exception as exc:  # noqa: BLE001  reported per replication
            return r, None, f"{type(exc).__name__}: {exc}"

    if threads == 1:
        outs = map(one, range(n))
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            outs = list(ex.map(one, range(n)))
    for r, paths, err in outs:
        results[r] = paths
        if err is not None:
            failures.append({"replication": r, "error": err})
    return PathEnsemble(config, results, [(int(config.seed), r) for r in range(n)], failures)


def write_csv(ensemble: PathEnsemble, fh):
    """Rows ``replication,component,t,x,xstar`` ordered by replication, component, time."""
    fh.write("replication,component,t,x,xstar\n")
    for r, paths in enumerate(ensemble.replications):
        if paths is None:
            continue
        for name, p in zip(COMPONENTS + ("total",), list(paths) + [paths.total]):
            for t, x, xs in zip(p.grid, p.values, p.integrated):
                fh.write(f"{r},{name},{float(t)!r},{float(x)!r},{float(xs)!r}\n")

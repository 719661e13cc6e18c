import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from supou.distributions import PointMasses, StableLaw, TwoSidedPareto, UniformJumps
from supou.levy import (UNBOUNDED_INDEX_ZERO, CompoundPoisson, GeometricStable, LightTailError, StablePair, Student,
                        ZeroMeasure)
from supou.model import (CharacteristicQuadruple, GammaPi, TabulatedPi, bg_index, correlation, levy_cumulant,
                         pi_from_dict, pi_moment, pi_regvar, supou_marginal_cumulant, tail_indices_at_infinity,
                         tail_indices_at_zero)
from supou.slowvar import SlowlyVarying, de_bruijn_conjugate

ZGRID = np.linspace(-2, 2, 9)


# ---------------------------------------------------------------- slowly varying


def test_de_bruijn_constants():
    assert de_bruijn_conjugate(SlowlyVarying.constant(2.0)) == SlowlyVarying.constant(0.5)
    assert de_bruijn_conjugate(SlowlyVarying.constant(1.0)) == SlowlyVarying.constant(1.0)


def test_de_bruijn_log_power_defining_limits():
    h = SlowlyVarying.log_power(1.0)
    hs = de_bruijn_conjugate(h)
    assert hs == SlowlyVarying.log_power(-1.0)
    # the defining product is log x / (log x + log log x): 0.872 at 1e9, within 5% only beyond ~1e43
    x = 1e9
    assert h(x) * hs(x * h(x)) == pytest.approx(math.log(x) / (math.log(x) + math.log(math.log(x))), rel=1e-12)
    x = 1e50
    assert h(x) * hs(x * h(x)) == pytest.approx(1.0, rel=0.05)
    assert hs(x) * h(x * hs(x)) == pytest.approx(1.0, rel=0.05)
    vals = [h(x) * hs(x * h(x)) for x in (1e9, 1e20, 1e50, 1e100)]
    assert np.all(np.diff(vals) > 0)


@given(st.floats(0.1, 10.0), st.floats(-2.0, 2.0))
def test_de_bruijn_is_involution(c, r):
    h = SlowlyVarying(c, r)
    back = de_bruijn_conjugate(de_bruijn_conjugate(h))
    assert back.scale == pytest.approx(c, rel=1e-14) and back.power == r


@pytest.mark.parametrize("lam", [2.0, 10.0])
def test_slow_variation(lam):
    # the ratio is (1 + log(lam)/log(x))^rho exactly; it is within 1e-2 of 1 only for log x >~ 100 rho log(lam)
    h = SlowlyVarying.log_power(1.5)
    x = 1e9
    assert h(lam * x) / h(x) == pytest.approx((1 + math.log(lam) / math.log(x)) ** 1.5, rel=1e-12)
    x = 10.0 ** (150 * 1.5 * math.log10(math.e) * math.log(lam) + 1)
    assert h(lam * x) / h(x) == pytest.approx(1.0, abs=1e-2)
    c = SlowlyVarying.constant(3.0)
    assert c(lam * 1e9) / c(1e9) == 1.0


def test_de_bruijn_rejects_other_types():
    with pytest.raises(TypeError):
        de_bruijn_conjugate(lambda x: 1.0)


def test_slowly_varying_roundtrip():
    for h in (SlowlyVarying.constant(2.5), SlowlyVarying.log_power(-0.5), SlowlyVarying(3.0, 2.0)):
        assert SlowlyVarying.from_dict(h.to_dict()) == h


# ---------------------------------------------------------------- pi


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_pi_regvar_gamma(alpha):
    a, ell = pi_regvar(GammaPi(alpha))
    assert a == alpha
    assert ell(10.0) == pytest.approx(1 / math.gamma(alpha + 1), rel=1e-12)
    # ell(1/x) x^alpha against the exact cdf at small x
    x = 1e-8
    assert special.gammainc(alpha, x) / (ell(1 / x) * x ** alpha) == pytest.approx(1.0, rel=1e-6)


def test_pi_moment_examples():
    assert pi_moment(GammaPi(2.0), -0.5) == pytest.approx(0.886226925452758, rel=1e-12)
    assert pi_moment(GammaPi(0.7), 0.0) == pytest.approx(1.0)
    assert pi_moment(GammaPi(0.5), -0.5) == math.inf


@given(st.floats(0.2, 3.0), st.floats(-1.5, 2.0))
@settings(max_examples=40, deadline=None)
def test_pi_moment_vs_quadrature(alpha, theta):
    if alpha + theta <= 0.05:
        return
    pi = GammaPi(alpha)
    f = lambda x: x ** theta * pi.density(x)
    # split at 1 with an algebraic weight for the endpoint singularity
    head = integrate.quad(lambda x: math.exp(-x) / math.gamma(alpha), 0, 1, weight="alg",
                          wvar=(alpha + theta - 1, 0), epsabs=1e-13, epsrel=1e-12)[0]
    tail = integrate.quad(f, 1, np.inf, epsabs=1e-13, epsrel=1e-12)[0]
    assert pi_moment(pi, theta) == pytest.approx(head + tail, rel=1e-8)


@pytest.mark.parametrize("alpha,t,val", [(0.5, 1.0, 2 ** -0.5), (2.0, 3.0, 1 / 16), (1.3, 0.0, 1.0)])
def test_correlation_examples(alpha, t, val):
    assert correlation(GammaPi(alpha), t) == pytest.approx(val, rel=1e-12)


@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_correlation_closed_form(t):
    for a in (0.3, 0.5, 2.0):
        pi = GammaPi(a)
        oracle = integrate.quad(lambda x: math.exp(-t * x) * pi.density(x), 0, np.inf)[0] if a >= 1 else (1 + t) ** -a
        assert correlation(pi, t) == pytest.approx((1 + t) ** -a, abs=1e-10)
        assert correlation(pi, t) == pytest.approx(oracle, rel=1e-8)


def test_gamma_quantile_is_inverse_cdf():
    pi = GammaPi(0.5)
    u = np.array([1e-6, 0.1, 0.5, 0.9])
    np.testing.assert_allclose(special.gammainc(0.5, pi.quantile(u)), u, rtol=1e-10)


def test_tabulated_pi_matches_gamma():
    x = np.linspace(1e-3, 40, 20001)
    d = x * np.exp(-x)  # Gamma(2)
    pi = TabulatedPi(2.0, SlowlyVarying.constant(0.5), tuple(x), tuple(d))
    assert pi_regvar(pi) == (2.0, SlowlyVarying.constant(0.5))
    assert pi.moment(1.0) == pytest.approx(2.0, rel=1e-3)
    assert pi.laplace(3.0) == pytest.approx(1 / 16, rel=1e-3)
    assert pi_from_dict(pi.to_dict()).moment(-0.5) == pytest.approx(pi.moment(-0.5), rel=1e-10)


def test_tabulated_pi_rejects_unnormalised():
    x = np.linspace(0.1, 5, 50)
    with pytest.raises(ValueError):
        TabulatedPi(1.0, SlowlyVarying.constant(1.0), tuple(x), tuple(3 * np.ones_like(x)))


# ---------------------------------------------------------------- Levy measure descriptors


def test_indices_at_zero():
    assert tail_indices_at_zero(CompoundPoisson(1.0, TwoSidedPareto(0.8, 0.5, 0.5)))[0] == 0.0
    b, cp, cm = tail_indices_at_zero(StablePair(1.0, 1.0, 1.5))
    assert (b, cp, cm) == pytest.approx((1.5, 2 / 3, 2 / 3))
    b, cp, cm = tail_indices_at_zero(Student(1.0, 1.3))
    assert (b, cp, cm) == pytest.approx((1.0, 1 / math.pi, 1 / math.pi))
    assert tail_indices_at_zero(GeometricStable(1.5, 1.0)) == UNBOUNDED_INDEX_ZERO


def test_student_table_near_zero():
    mu = Student(2.0, 1.3)
    x = 1e-6
    assert mu.tail(x) * x == pytest.approx(2.0 / math.pi, rel=1e-3)


def test_bg_indices():
    assert bg_index(GeometricStable(1.5, 1.0)) == 0.0
    assert bg_index(StablePair(1.0, 1.0, 1.2)) == 1.2
    assert bg_index(CompoundPoisson(2.0, UniformJumps(-1, 1))) == 0.0
    for mu in (StablePair(0.3, 1.0, 0.7), Student(1.0, 1.5)):
        assert bg_index(mu) == tail_indices_at_zero(mu)[0]


def test_bg_index_moment_threshold():
    mu = StablePair(1.0, 1.0, 1.2)
    assert math.isinf(mu.abs_moment(1.19, 0.0, 1.0)) or mu.abs_moment(1.19, 1e-300, 1.0) > 1e10
    assert math.isfinite(mu.abs_moment(1.21, 0.0, 1.0))


def test_tail_at_infinity_stable():
    t = tail_indices_at_infinity(StablePair(1.0, 1.0, 1.2))
    assert (t.gamma, t.p, t.q) == pytest.approx((1.2, 0.5, 0.5))
    # marginal tail p k x^-g equals the Levy tail (c1/g) x^-g divided by g
    x = 1e6
    assert t.p * t.k(x) * x ** -1.2 == pytest.approx(StablePair(1.0, 1.0, 1.2).tail(x) / 1.2, rel=1e-12)
    assert t.k(x) == pytest.approx(2 / 1.2 ** 2, rel=1e-12)


def test_tail_at_infinity_cp_and_student():
    t = tail_indices_at_infinity(CompoundPoisson(1.0, TwoSidedPareto(0.8, 0.5, 0.5)))
    assert (t.gamma, t.p, t.q) == pytest.approx((0.8, 0.5, 0.5))
    assert tail_indices_at_infinity(Student(1.0, 1.7)).gamma == 1.7


def test_light_tail_error():
    with pytest.raises(LightTailError):
        tail_indices_at_infinity(CompoundPoisson(1.0, UniformJumps(-1, 1)))
    with pytest.raises(LightTailError):
        tail_indices_at_infinity(ZeroMeasure())


# ---------------------------------------------------------------- cumulants


def test_levy_cumulant_gaussian():
    q = CharacteristicQuadruple(0.0, 2.0, ZeroMeasure(), GammaPi(1.0))
    np.testing.assert_allclose(levy_cumulant(q, ZGRID), -ZGRID ** 2, atol=1e-15)


def test_levy_cumulant_stable_pair_unit_scale():
    mu = StablePair.from_law(1.0, 0.0, 1.5)
    q = CharacteristicQuadruple.mean_zero(0.0, mu, GammaPi(1.0))
    assert levy_cumulant(q, 1.0) == pytest.approx(-1.0, abs=1e-10)


@pytest.mark.parametrize("g,r", [(0.7, 0.4), (1.5, -0.6), (1.0, 0.0), (1.3, 1.0)])
def test_stable_pair_matches_stable_law(g, r):
    mu = StablePair.from_law(1.3, r, g)
    q = CharacteristicQuadruple(-mu.compensation_drift(), 0.0, mu, GammaPi(1.0))
    np.testing.assert_allclose(levy_cumulant(q, ZGRID), StableLaw(g, 1.3, r).cumulant(ZGRID), atol=1e-9)


def test_levy_cumulant_point_masses():
    mu = CompoundPoisson(1.0, PointMasses((-1.0, 1.0), (0.5, 0.5)))
    q = CharacteristicQuadruple(0.0, 0.0, mu, GammaPi(1.0))
    np.testing.assert_allclose(levy_cumulant(q, ZGRID), np.cos(ZGRID) - 1, atol=1e-12)


def test_mean_zero_drift():
    mu = CompoundPoisson(2.0, TwoSidedPareto(1.5, 0.8, 0.2))
    q = CharacteristicQuadruple.mean_zero(0.0, mu, GammaPi(1.0))
    assert q.mean() == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        CharacteristicQuadruple.mean_zero(0.0, CompoundPoisson(1.0, TwoSidedPareto(0.8, 0.5, 0.5)), GammaPi(1.0))


def test_marginal_gaussian():
    q = CharacteristicQuadruple(0.0, 3.0, ZeroMeasure(), GammaPi(0.5))
    np.testing.assert_allclose(supou_marginal_cumulant(q, ZGRID), -3.0 * ZGRID ** 2 / 4, atol=1e-10)
    assert supou_marginal_cumulant(q, 0.0) == 0


def test_marginal_stable_scale_identity():
    # L(1) ~ S(s_L, rho) gives X(0) ~ S(s_L g^{-1/g}, rho)
    g, s, r = 1.5, 1.5 ** (1 / 1.5), 0.3
    mu = StablePair.from_law(s, r, g)
    q = CharacteristicQuadruple.mean_zero(0.0, mu, GammaPi(0.5))
    z = np.array([-1.5, -0.4, 0.3, 1.0])
    np.testing.assert_allclose(supou_marginal_cumulant(q, z), StableLaw(g, 1.0, r).cumulant(z), atol=1e-8)


@pytest.mark.parametrize("mu_factory", [
    lambda: StablePair.from_law(1.0, 0.2, 1.4),
    lambda: CompoundPoisson(0.8, TwoSidedPareto(0.8, 0.5, 0.5)),
    lambda: Student(1.0, 1.5),
])
def test_marginal_pi_independence(mu_factory):
    mu = mu_factory()
    a = CharacteristicQuadruple.natural(mu, GammaPi(0.5), 0.5)
    b = CharacteristicQuadruple.natural(mu, GammaPi(2.0), 0.5)
    np.testing.assert_allclose(supou_marginal_cumulant(a, ZGRID), supou_marginal_cumulant(b, ZGRID), atol=1e-9)


def test_quadruple_roundtrip():
    q = CharacteristicQuadruple.natural(Student(1.0, 0.8, 0.2), GammaPi(0.5), 0.3)
    back = CharacteristicQuadruple.from_dict({**q.to_dict(), "a": q.a})
    assert back.a == q.a and back.b == q.b
    np.testing.assert_allclose(levy_cumulant(back, ZGRID), levy_cumulant(q, ZGRID), atol=1e-12)
    assert q.a == 0.2  # Student drift is its location


def test_negative_gaussian_variance_rejected():
    with pytest.raises(ValueError):
        CharacteristicQuadruple(0.0, -1.0, ZeroMeasure(), GammaPi(1.0))

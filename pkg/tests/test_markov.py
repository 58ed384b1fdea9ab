import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from channelfield._validation import InvalidArgumentError
from channelfield.markov import (
    DELTA,
    ChainState,
    ConstantPModel,
    ExactPModel,
    LowerBoundPModel,
    certify_c1,
    certify_c2,
    conditioned_first_ratio,
    couple_pareto,
    doob_first_ratio,
    exact_block_ratio,
    g_mass,
    g_mu,
    g_mu_closed,
    lambda0_split,
    lambda_j,
    lambdas_closed,
    normalizer_constants,
    p_lower,
    q_tail,
    q_tail_quad,
    r_norm,
    rate_sum_formula,
    rate_table,
    sample_Q,
    sample_W_paths,
    simulate_F,
    survival_estimate,
    transition_sample,
)

ZETAS = [1.0, 2.0, 5.0, 10.0, 100.0]
ALPHAS = [1.2, 1.5, 1.8]


def direct(f, zeta, alpha, hi=np.inf):
    """Plain quadrature of ``int f(xi) alpha xi^-alpha`` in ``xi``."""
    return integrate.quad(lambda x: f(x) * alpha * x ** (-alpha), zeta, hi, limit=500, epsabs=0, epsrel=1e-11)[0]


def test_lambda3_closed_form():
    assert lambda_j(2.0, 3, 1.5) == pytest.approx(2.0**-1.5, rel=1e-14)
    assert lambda_j(2.0, 3, 1.5) == pytest.approx(0.353553, abs=1e-6)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("zeta", [1.0, 3.0, 20.0])
def test_rates_against_direct_quadrature(alpha, zeta):
    oracle = [
        0.5 * direct(lambda x: math.exp(-2 / x), zeta, alpha),
        0.5 * direct(lambda x: math.exp(-1 / x) - math.exp(-2 / x), zeta, alpha),
        0.5 * direct(lambda x: -math.expm1(-1 / x), zeta, alpha) + 0.5 * zeta**-alpha,
        zeta**-alpha,
    ]
    got = [lambda_j(zeta, j, alpha) for j in range(4)]
    np.testing.assert_allclose(got, oracle, rtol=1e-8)
    np.testing.assert_allclose(lambdas_closed(zeta, alpha), got, rtol=1e-10)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("zeta", ZETAS)
def test_rate_sum_identity(alpha, zeta):
    total = sum(lambda_j(zeta, j, alpha) for j in range(4))
    assert total == pytest.approx(alpha / (2 * (alpha - 1)) * zeta ** (1 - alpha) + 1.5 * zeta**-alpha, rel=1e-10)
    t = rate_table(zeta, alpha)
    assert t.total == pytest.approx(float(rate_sum_formula(zeta, alpha)), rel=1e-10)
    assert t.r_norm == pytest.approx(float(r_norm(zeta, alpha)), rel=1e-10)


def test_rates_decrease_to_zero():
    z = np.geomspace(1, 1e8, 50)
    lam = lambdas_closed(z)
    assert np.all(np.diff(lam, axis=1) < 0)
    assert lam[:, -1].max() < 1e-3


def test_invalid_zeta():
    with pytest.raises(InvalidArgumentError):
        lambda_j(0.5, 0)
    with pytest.raises(InvalidArgumentError):
        lambda_j(2.0, 4)


@pytest.mark.parametrize("zeta,a", [(1.0, 2.0), (3.0, 1.5), (10.0, 7.0)])
def test_lambda0_split(zeta, a):
    plus, minus = lambda0_split(zeta, a)
    assert plus + minus == pytest.approx(lambda_j(zeta, 0), rel=1e-10)
    assert plus / lambda_j(zeta, 0) == pytest.approx(q_tail(zeta, a), rel=1e-9)


def test_lambda0_split_limits():
    assert lambda0_split(2.0, 1.0 + 1e-9)[1] < 1e-8
    assert lambda0_split(2.0, 1e12)[0] < 1e-5
    with pytest.raises(InvalidArgumentError):
        lambda0_split(2.0, 1.0)


@pytest.mark.parametrize("k", [1, 2])
def test_q_tail_against_quadrature(k):
    for zeta in (1.0, 4.0):
        for a in (1.5, 3.0, 10.0):
            assert q_tail(zeta, a, k=k) == pytest.approx(q_tail_quad(zeta, a, k=k), rel=1e-9)
            oracle = direct(lambda x: math.exp(-k / x), a * zeta, 1.5) / direct(lambda x: math.exp(-k / x), zeta, 1.5)
            assert q_tail(zeta, a, k=k) == pytest.approx(oracle, rel=1e-8)


def test_q_tail_endpoints_and_limit():
    assert q_tail(3.0, 1.0) == 1.0
    assert q_tail(1e6, 4.0) == pytest.approx(4.0 ** (1 - 1.5), rel=1e-5)
    with pytest.raises(InvalidArgumentError):
        q_tail(2.0, 0.5)


@given(st.floats(1.0, 1e4), st.floats(1.0, 50.0))
def test_q_tail_monotone(zeta, a):
    assert q_tail(zeta, a) >= q_tail(zeta, a + 1.0)


def test_sample_Q_law():
    z = sample_Q(np.ones(100_000), seed=1)
    assert z.min() >= 1.0
    ks = stats.kstest(z, lambda x: 1.0 - q_tail(1.0, x))
    assert ks.pvalue > 0.01
    frac = np.mean(z >= 2.0)
    assert abs(frac - q_tail(1.0, 2.0)) < 3 * math.sqrt(frac * (1 - frac) / len(z))


def test_couple_pareto():
    assert couple_pareto(3.0, 3.0) == 1.0
    W = sample_W_paths(1.0, 100, 1000, seed=5)
    prev, nxt = W[:, :-1].ravel(), W[:, 1:].ravel()
    keep = nxt < 1e300
    chi = couple_pareto(prev[keep], nxt[keep])
    assert np.all(chi <= nxt[keep] / prev[keep])
    assert stats.kstest(chi, stats.pareto(b=0.5).cdf).pvalue > 0.01
    with pytest.raises(InvalidArgumentError):
        couple_pareto(3.0, 2.0)


def test_transition_kernel():
    assert transition_sample(DELTA, ConstantPModel(1.0), seed=0) is DELTA
    assert transition_sample(ChainState(2.0, 1.0), ConstantPModel(0.0), seed=0) is DELTA
    rng = np.random.default_rng(0)
    es = []
    s = ChainState(1.0, 0.0)
    for _ in range(3000):
        s = transition_sample(ChainState(1.0, 0.0), ConstantPModel(1.0), rng=rng)
        assert s.zeta >= 1.0
        es.append(s.e)
    assert stats.kstest(es, "expon").pvalue > 0.01
    with pytest.raises(InvalidArgumentError):
        ChainState(0.5, 1.0)


def test_exact_block_ratio():
    z = np.geomspace(1, 1e12, 40)
    r = exact_block_ratio(z)
    assert np.all((r > 0) & (r < 1))
    assert r[-1] == pytest.approx(1.0, abs=1e-3)
    g = np.geomspace(1, 1e8, 400)
    c1 = certify_c1(grid=g)
    assert np.all(exact_block_ratio(g) >= np.exp(-2 / g) * (1 - c1 * g ** (1.5 - 2)) - 1e-12)


def test_g_mass():
    for z in (1.0, 3.0, 50.0):
        assert g_mu(z) == pytest.approx(float(g_mu_closed(z)), rel=1e-9)
        assert g_mu(z, direction=2) == g_mu(z, direction=1)
    z = np.geomspace(1, 1e12, 30)
    mu = g_mu_closed(z)
    assert np.all(np.diff(mu) < 0)
    assert g_mass(1e12) == pytest.approx(1.0, abs=1e-5)
    assert np.all(mu <= certify_c2() * z ** (1 - 1.5) * (1 + 1e-12))
    k1, k2 = normalizer_constants()
    assert 0 < k1 <= k2


def test_g_mass_frozen():
    # 2.5 + 1.5 at zeta = 1
    assert g_mass(1.0) == pytest.approx(math.exp(-4.0), rel=1e-10)


def test_exact_p_model_interpolation():
    pm = ExactPModel()
    for z in (1.0, 3.7, 123.0, 5e4):
        assert pm(z) == pytest.approx(pm.exact(z), abs=1e-5)
    assert pm(1.0) == pytest.approx(0.122, abs=5e-3)


def test_p_lower():
    assert p_lower(1e12, 1.0, 1.0) == pytest.approx(1.0, abs=1e-3)
    assert p_lower(1.0, 2.0, 1.0) == 0.0
    with pytest.raises(InvalidArgumentError):
        p_lower(2.0, -1.0, 1.0)
    vals = [p_lower(z, 0.5, 1.0, mc_samples=20_000, seed=3) for z in (2.0, 5.0, 20.0, 100.0)]
    assert all(b >= a - 0.01 for a, b in zip(vals, vals[1:]))
    model = LowerBoundPModel(0.5, 1.0)
    assert model(20.0) == pytest.approx(p_lower(20.0, 0.5, 1.0, mc_samples=50_000), abs=0.01)


def test_survival_estimate():
    assert survival_estimate(1.0, 10, 100, ConstantPModel(1.0)).value == 1.0
    pm = ExactPModel()
    e = [survival_estimate(z, 50, 10_000, pm, seed=i) for i, z in enumerate((1.0, 2.0, 5.0, 10.0))]
    assert e[0].value > 3 * e[0].se
    assert all(0 < x.value <= 1 for x in e)
    assert all(b.value >= a.value - 3 * math.hypot(a.se, b.se) for a, b in zip(e, e[1:]))


def test_doob_reweighting_matches_conditioning():
    pm = ExactPModel()
    r, w = doob_first_ratio(2.0, 6, 100_000, pm, seed=1)
    c = conditioned_first_ratio(2.0, 6, 200_000, pm, seed=2)
    for a in (2.0, 5.0, 20.0):
        pw = np.sum(w * (r >= a)) / np.sum(w)
        pc = np.mean(c >= a)
        se = math.sqrt(pc * (1 - pc) / len(c)) + math.sqrt(pw * (1 - pw) / len(r))
        assert abs(pw - pc) < 3 * se


def test_simulate_F():
    f = simulate_F(1, seed=0, paths=1)
    assert f.F[0, 0] > 0
    out = simulate_F(200, seed=0, paths=1000)
    assert np.median(out.running_min[:, 199]) < 0.2 * np.median(out.running_min[:, 9])
    # the mean stays bounded along m
    means = out.F.mean(axis=0)
    assert means[-50:].mean() < 10 * means[:10].mean()

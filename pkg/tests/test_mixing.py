import json

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from channelfield._validation import InsufficientSampleError, InvalidArgumentError
from channelfield.ensemble import level0_ensemble
from channelfield.mixing import (
    MixingReport,
    empirical_mixing,
    mixing_ensemble,
    overlap_bound,
    overlap_bound_closed,
    overlap_mass_exact,
    overlap_mass_mc,
    overlap_superset_mc,
    poisson_bins,
    strong_markov_test,
)


def tail_oracle(d, alpha=1.5):
    # substitute u = 1/xi
    with mp.workdps(30):
        a = mp.mpf(alpha)
        return mp.quad(lambda u: a * u ** (a - 2) * mp.exp(-d * u), [0, mp.mpf(1) / 100, mp.mpf(1) / 10, 1])


@pytest.mark.parametrize("z1,frozen", [(5.0, 3.026), (10.0, 1.880), (20.0, 1.253), (40.0, 0.863)])
def test_overlap_bound_oracle(z1, frozen):
    oracle = float(2 * tail_oracle(z1 - 2))
    assert overlap_bound(1.0, z1) == pytest.approx(oracle, rel=1e-8)
    assert overlap_bound_closed(1.0, z1) == pytest.approx(oracle, rel=1e-10)
    assert overlap_bound(1.0, z1) == pytest.approx(frozen, abs=5e-4)
    assert overlap_mass_exact(1.0, z1) == pytest.approx(0.75 * oracle, rel=1e-10)


def test_overlap_regime():
    with pytest.raises(InvalidArgumentError):
        overlap_bound(1.0, 4.0)
    with pytest.raises(InvalidArgumentError):
        overlap_bound(2.0, 7.9)


def test_overlap_bound_decreases_to_zero():
    z = np.geomspace(5, 1e6, 30)
    b = [overlap_bound_closed(1.0, v) for v in z]
    assert all(y < x for x, y in zip(b, b[1:]))
    assert b[-1] < 0.01


@given(st.floats(4.01, 200.0))
def test_bound_dominates_exact_mass(z1):
    assert overlap_mass_exact(1.0, z1) <= overlap_bound_closed(1.0, z1)


def test_superset_mc_matches_quadrature():
    est = overlap_superset_mc(1.0, 10.0, n=200_000, seed=3)
    assert abs(est.value - overlap_bound(1.0, 10.0)) < 4 * est.se


def test_sampled_overlap_below_bound():
    est = overlap_mass_mc(1.0, 10.0, n=400, seed=1)
    assert abs(est.value - overlap_mass_exact(1.0, 10.0)) < 4 * est.se
    assert est.value < overlap_bound(1.0, 10.0)


@pytest.fixture(scope="module")
def report():
    ens = mixing_ensemble(150, seed=2, height=24.0)
    return empirical_mixing(ens)


def test_mixing_report_invariants(report, tmp_path):
    l1 = [abs(a) + abs(b) for a, b in report.lags]
    assert l1 == sorted(l1)
    assert 0 < report.correlations[0] <= 0.25
    assert all(s > 0 for s in report.standard_errors)
    assert report.null_consistent(4.0)
    assert report.monotone(4.0)
    assert report.analytic_bounds[0] is None
    assert report.analytic_bounds[-1] == pytest.approx(overlap_bound(1.0, 40.0))
    pj, pc = report.write(tmp_path)
    d = json.loads(pj.read_text())
    assert d["n_configs"] == 150 and d["lags"][0] == [0, 0]
    assert len(pc.read_text().splitlines()) == len(report.lags) + 1


def test_mixing_report_validation(report):
    d = report.to_dict()
    d.pop("version")
    d["lags"] = list(reversed(d["lags"]))
    with pytest.raises(InvalidArgumentError):
        MixingReport(**d)


def test_mixing_needs_ensemble():
    with pytest.raises(InsufficientSampleError):
        empirical_mixing(mixing_ensemble(20, seed=0, height=10.0))


def test_poisson_bins_cover():
    bins = poisson_bins(4.0, 2000)
    assert bins[0][0] == 0 and bins[-1][1] == -1
    assert all(b[0] == a[1] + 1 for a, b in zip(bins, bins[1:]))


@pytest.fixture(scope="module")
def level0():
    return level0_ensemble(3000, seed=9)


def test_strong_markov(level0):
    rep = strong_markov_test(level0, min_events=100)
    assert rep.expected_mean == 4.0
    assert rep.passed(0.001)
    assert sum(rep.observed) == rep.n_events


def test_strong_markov_errors(level0):
    with pytest.raises(InsufficientSampleError, match="replicas"):
        strong_markov_test(level0, min_events=10**6)
    with pytest.raises(InvalidArgumentError):
        strong_markov_test(level0, box_spec=((0, 1, -1, 0), level0.pre_box), min_events=10)


def test_strong_markov_degenerate_box():
    ens = level0_ensemble(400, seed=1, post_box=(0.0, 0.0, -2.0, 0.0))
    rep = strong_markov_test(ens, min_events=5)
    assert rep.degenerate and rep.passed()

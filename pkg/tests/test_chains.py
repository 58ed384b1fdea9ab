import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from channelfield._validation import InvalidArgumentError
from channelfield.chains import (
    ChainRecord,
    blocking_times,
    detect_chain,
    is_successor_index,
    reflect_view,
    residual_length,
)
from channelfield.ensemble import level0_ensemble
from channelfield.geometry import Rect
from channelfield.markov import r_norm
from channelfield.pointfield import IntensityParams, sample_configuration
from channelfield.tessellation import TessellationView
from channelfield.verify import load_fixtures, random_quantized_case, successor_grid_oracle

from conftest import make_config

FIXTURES = {f["name"]: f for f in load_fixtures()}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_chain_matches_hand_derivation(name):
    f = FIXTURES[name]
    view = TessellationView(f["configuration"])
    assert detect_chain(tuple(f["y"]), view, f["n_max"]).to_dict() == f["expected_chain"]
    for s in f["successors"]:
        assert is_successor_index(view, s["i"], s["j"], s["L"]) is s["expected"]
        assert successor_grid_oracle(view, s["i"], s["j"], s["L"]) is s["expected"]


def test_successor_against_grid_oracle():
    rng = np.random.default_rng(8)
    trues = 0
    for _ in range(200):
        cfg, i, j, L = random_quantized_case(rng)
        view = TessellationView(cfg)
        slow = successor_grid_oracle(view, i, j, L)
        assert is_successor_index(view, i, j, L) == slow
        trues += slow
    # both outcomes are exercised
    assert 0 < trues < 200


def test_successor_needs_opposite_direction_and_stronger():
    view = TessellationView(make_config([((0, 0), 10.0, 2.0, 1), ((6, -3), 2.0, 5.0, 1), ((4, 0.5), 1.0, 1.5, 2)]))
    assert not is_successor_index(view, 0, 1, 2.5)
    assert not is_successor_index(view, 0, 2, 2.5)


def test_level0_failure_paths():
    # start not covered
    rec = detect_chain((2.5, 0.5), TessellationView(make_config([])))
    assert rec.terminal_level == -1 and rec.b_flags == [False]
    # vertical domain at the start
    rec = detect_chain((2.5, 0.5), TessellationView(make_config([((2.0, 0.0), 3.0, 2.0, 2)])))
    assert rec.b_flags == [False]
    with pytest.raises(InvalidArgumentError):
        residual_length(rec, 0)


def test_start_outside_window_truncates():
    rec = detect_chain((-0.5, 0.5), TessellationView(make_config([((0, 0), 10.0, 2.0, 1)])))
    assert rec.truncated and rec.terminal_level == -1


def test_rescaled_lengths():
    f = FIXTURES["three_domain"]
    view = TessellationView(f["configuration"])
    rec = detect_chain(tuple(f["y"]), view)
    assert residual_length(rec, 0) == pytest.approx((0.0 - 2.5) / 2.0 + 10.0)
    assert rec.e[1] == pytest.approx(rec.R[1] / float(r_norm(2.0)))
    assert rec.R[1] == pytest.approx(6.0 - 2.5)


def test_blocking_times_by_hand():
    f = FIXTURES["three_domain"]
    view = TessellationView(f["configuration"])
    bt = blocking_times(detect_chain(tuple(f["y"]), view), 0, view)
    assert bt.tau == [3.5, math.inf, math.inf, math.inf]
    assert bt.censor == 7.5
    assert bt.xi_L == 17.5
    assert bt.observed == [True, False, False, False]
    assert bt.next_is_complete() is True


def test_blocking_times_censored():
    view = TessellationView(make_config([((0, 0), 10.0, 2.0, 1)]))
    bt = blocking_times(detect_chain((2.5, 0.5), view), 0, view)
    assert bt.tau == [math.inf] * 4
    assert bt.next_is_complete() is None


def test_chain_json_round_trip(sampled_view):
    for y in [(3.0, 3.0), (5.5, 7.25), (9.0, 4.0)]:
        rec = detect_chain(y, sampled_view)
        back = ChainRecord.from_dict(json.loads(rec.to_json()))
        assert back == rec


@given(st.floats(2.0, 10.0), st.floats(2.0, 10.0))
def test_chain_structure(sampled_view, y1, y2):
    rec = detect_chain((y1, y2), sampled_view)
    cfg = sampled_view.config
    xi = cfg.xi[rec.indices]
    sig = cfg.sigma[rec.indices]
    assert np.all(np.diff(xi) > 0)
    assert np.all(sig[1:] != sig[:-1])
    assert len(rec.indices) == rec.depth
    assert all(r > 0 for r in rec.R[1:])


def test_complete_block_matches_next_level():
    ens = level0_ensemble(1500, seed=4)
    decided = ens.complete_from_tau >= 0
    assert decided.sum() > 100
    # a decided complete block is exactly the level-1 blocking event
    assert np.array_equal(ens.complete_from_tau[decided] == 1, ens.b1[decided])


def test_reflect_view_swaps_axes():
    cfg = sample_configuration(Rect(0, 12, 0, 12), 1e-6, IntensityParams(1.5), seed=5)
    view = TessellationView(cfg)
    refl = reflect_view(view)
    rng = np.random.default_rng(1)
    for p in rng.uniform(0.5, 11.5, (200, 2)):
        assert view.phi_index(*p) == refl.phi_index(p[1], p[0])
    assert np.array_equal(refl.config.sigma, 3 - cfg.sigma)
    assert refl.window == Rect(0, 12, 0, 12)

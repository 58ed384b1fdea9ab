import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from channelfield._validation import OutOfWindowError
from channelfield.geometry import Rect
from channelfield.pointfield import Configuration
from channelfield.tessellation import THETA, TessellationView, domain_of, selector_rank

from conftest import make_config


def test_stronger_domain_wins():
    view = TessellationView(make_config([((0, 0), 2.0, 2.0, 1), ((1, -1), 1.0, 5.0, 2)]))
    assert view.phi_at((1.5, 0.5)).xi == 5.0
    assert view.phi_at((0.5, 0.5)).xi == 2.0


def test_uncovered_point_is_theta():
    view = TessellationView(make_config([((0, 0), 1.0, 2.0, 1)]))
    assert view.phi_at((5.0, 5.0)) is THETA
    np.testing.assert_array_equal(view.v_tilde_at((5.0, 5.0)), [0.5, 0.5])


def test_domains_are_closed():
    view = TessellationView(make_config([((0, 0), 1.0, 2.0, 1)]))
    assert view.phi_index(2.0, 1.0) == 0
    assert view.phi_index(2.0 + 1e-12, 1.0) == -1


def test_domain_of_orientation():
    cfg = make_config([((1, 2), 3.0, 2.0, 2)])
    assert domain_of(cfg.point(0)).rect.bounds == (1.0, 2.0, 2.0, 8.0)


def test_equal_strength_tie_broken_by_position():
    cfg = make_config([((0, 0), 2.0, 2.0, 1), ((0.5, -0.5), 1.0, 2.0, 2)])
    rank = selector_rank(cfg)
    assert rank[1] > rank[0]
    assert TessellationView(cfg).phi_index(0.7, 0.2) == 1


def test_out_of_window_query_raises():
    view = TessellationView(make_config([((0, 0), 1.0, 2.0, 1)]))
    with pytest.raises(OutOfWindowError):
        view.phi_index(100.0, 0.0)
    with pytest.raises(OutOfWindowError):
        view.domains_meeting(Rect(0, 100, 0, 1))


coord = st.integers(0, 16).map(lambda k: k * 0.5)


@st.composite
def configs(draw):
    n = draw(st.integers(0, 10))
    xi = draw(st.lists(st.integers(0, 30), min_size=n, max_size=n, unique=True))
    rows = []
    for k in range(n):
        length = draw(st.integers(1, 12)) * 0.5
        s = 2.0 ** xi[k]
        rows.append(((draw(coord), draw(coord)), length / s, s, draw(st.sampled_from([1, 2]))))
    return make_config(rows, window=Rect(0, 8, 0, 8))


@given(configs(), st.lists(st.tuples(st.floats(0, 8), st.floats(0, 8)), min_size=1, max_size=30))
def test_grid_index_agrees_with_linear_scan(cfg, pts):
    view = TessellationView(cfg)
    fast = [view.phi_index(x, y) for x, y in pts]
    assert fast == [view.phi_scan((x, y)) for x, y in pts]
    assert list(view.phi_many(np.array(pts))) == fast


@given(configs(), st.tuples(coord, coord, st.integers(0, 6), st.integers(0, 6)),
       st.tuples(st.booleans(), st.booleans(), st.booleans(), st.booleans()))
def test_region_queries_agree_with_scan(cfg, box, opens):
    x0, y0, w, h = box
    R = Rect(x0, min(x0 + 0.5 * w, 8.0), y0, min(y0 + 0.5 * h, 8.0), *opens)
    view = TessellationView(cfg)
    assert view.domains_meeting(R) == view.domains_meeting_scan(R)
    for i in range(len(cfg)):
        assert view.region_constant_index(R, i) == view.region_constant_index(R, i, scan=True)


@given(configs(), st.floats(0, 8), st.floats(0, 8))
def test_selected_domain_is_strongest_cover(cfg, x, y):
    view = TessellationView(cfg)
    i = view.phi_index(x, y)
    covering = [k for k in range(len(cfg)) if view.covers(k, x, y)]
    if not covering:
        assert i == -1
    else:
        assert cfg.xi[i] == max(cfg.xi[k] for k in covering)


def test_sampled_view_large(sampled_view):
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 20, (300, 2))
    assert list(sampled_view.phi_many(pts)) == [sampled_view.phi_scan(p) for p in pts]


def test_dump_json_lists_every_domain(sampled_view):
    import json

    d = json.loads(sampled_view.dump_json())
    assert len(d["domains"]) == len(sampled_view.config)

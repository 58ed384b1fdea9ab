import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from channelfield._validation import OutOfWindowError
from channelfield.geometry import Rect
from channelfield.mollify import (
    SUPPORT,
    ConstantField,
    FieldEvaluator,
    MollifierSpec,
    bump,
    bump_integral,
    rho,
    rho_total,
    v_at,
)
from channelfield.tessellation import TessellationView

from conftest import make_config


def test_bump_vanishes_outside():
    assert bump(1.0) == 0.0 and bump(-1.0) == 0.0 and bump(0.0) == pytest.approx(math.exp(-1))


def test_rho_normalized():
    assert rho_total() == pytest.approx(1.0, abs=1e-12)
    val, _ = integrate.dblquad(lambda b, a: rho((a, b)), -SUPPORT, 0, -SUPPORT, 0, epsabs=1e-12)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_bump_integral_frozen():
    assert bump_integral() == pytest.approx(0.443993816168, abs=1e-11)


def test_empty_configuration_gives_diagonal():
    view = TessellationView(make_config([]))
    np.testing.assert_array_equal(v_at((2.0, 2.0), view), [0.5, 0.5])


def test_inside_single_domain_gives_direction():
    view = TessellationView(make_config([((0, 0), 2.0, 3.0, 2)]))
    np.testing.assert_array_equal(v_at((0.7, 3.0), view), [0.0, 1.0])


def test_straddling_edge_is_a_mixture():
    # horizontal domain ending at x = 5; support of x = 5.1 is half inside
    view = TessellationView(make_config([((0, 0), 2.5, 2.0, 1)]))
    v = v_at((5.0 + SUPPORT / 2, 0.5), view)
    # left half carries e1, right half the diagonal; the bump is symmetric
    assert v[0] == pytest.approx(0.5 * 1.0 + 0.5 * 0.5, abs=1e-12)


def test_support_must_stay_in_window():
    view = TessellationView(make_config([((0, 0), 2.0, 3.0, 2)]))
    with pytest.raises(OutOfWindowError):
        v_at((-0.9, 0.0), view)


def test_composite_rule_converges(sampled_view):
    rng = np.random.default_rng(3)
    lo, hi = MollifierSpec(32), MollifierSpec(64)
    worst = max(abs(v_at(p, sampled_view, lo)[0] - v_at(p, sampled_view, hi)[0]) for p in rng.uniform(1, 19, (200, 2)))
    assert worst < 1e-10


def test_tensor_rule_is_inaccurate_at_edges():
    view = TessellationView(make_config([((0, 0), 2.5, 2.0, 1)]))
    x = (5.0 + SUPPORT / 2 + 0.01, 0.5)
    exact = v_at(x, view, MollifierSpec(64))[0]
    assert abs(v_at(x, view, MollifierSpec(32, "tensor"))[0] - exact) > 1e-6


@given(st.floats(1.0, 19.0), st.floats(1.0, 19.0))
def test_unit_sum_and_range(sampled_view, x, y):
    v = v_at((x, y), sampled_view)
    assert abs(v.sum() - 1.0) <= 1e-12
    assert np.all((v >= 0) & (v <= 1))


def test_evaluator_cache_returns_copies(sampled_view):
    f = FieldEvaluator(sampled_view)
    a = f((3.3, 4.4))
    a[0] = 99.0
    assert f((3.3, 4.4))[0] != 99.0
    assert FieldEvaluator(None)((0, 0)).tolist() == [0.5, 0.5]
    assert ConstantField(0.25)((0, 0)).tolist() == [0.25, 0.75]


def test_spec_validation():
    with pytest.raises(ValueError):
        MollifierSpec(32, "simpson")

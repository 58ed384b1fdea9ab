import math

import numpy as np
import pytest

from channelfield._validation import OutOfWindowError
from channelfield.flow import (
    Curve,
    crossing_time,
    dyadic_checkpoints,
    integrate_curve,
    position_at,
    ratio_stats,
    resume_curve,
    step_halving_ratio,
)
from channelfield.geometry import Rect
from channelfield.mollify import ConstantField, FieldEvaluator
from channelfield.pointfield import IntensityParams, sample_configuration
from channelfield.tessellation import TessellationView


@pytest.fixture(scope="module")
def field40():
    cfg = sample_configuration(Rect(-2, 45, -2, 45), 1e-6, IntensityParams(1.5), seed=21)
    return FieldEvaluator(TessellationView(cfg))


def test_empty_field_is_diagonal():
    c = integrate_curve((1.0, 2.0), 4.0, 0.5, ConstantField(0.5))
    np.testing.assert_allclose(c.positions, np.column_stack([1 + c.times / 2, 2 + c.times / 2]))


def test_conservation_on_sampled_field(field40):
    c = integrate_curve((0.0, 0.0), 20.0, 1e-2, field40)
    assert not c.truncated
    assert c.conservation_error() < 1e-6


def test_leaving_window_truncates(field40):
    c = integrate_curve((40.0, 40.0), 50.0, 0.1, field40)
    assert c.truncated
    assert c.times[-1] < 50.0


def test_resume_reproduces_prefix(field40, tmp_path):
    full = integrate_curve((1.0, 1.0), 3.0, 0.05, field40)
    part = integrate_curve((1.0, 1.0), 1.5, 0.05, field40)
    part.write_csv(tmp_path / "c.csv")
    back = Curve.read_csv(tmp_path / "c.csv", 0.05)
    res = resume_curve(back, 3.0, field40)
    np.testing.assert_array_equal(res.times, full.times)
    np.testing.assert_array_equal(res.positions, full.positions)


def test_csv_round_trip_is_exact(field40, tmp_path):
    c = integrate_curve((0.3, 0.7), 1.0, 0.1, field40)
    back = Curve.read_csv(c.write_csv(tmp_path / "c.csv"), 0.1)
    np.testing.assert_array_equal(back.positions, c.positions)


def smooth(x):
    s = 0.25 * math.sin(x[1])
    return np.array([0.5 + s, 0.5 - s])


def test_fourth_order_on_smooth_field():
    assert 14.0 <= step_halving_ratio((0.0, 0.3), 5.0, 0.2, smooth) <= 18.0


def test_fourth_order_on_sampled_field(field40):
    rng = np.random.default_rng(2)
    ratios = []
    for z in rng.uniform(1, 10, (30, 2)):
        a = integrate_curve(z, 5.0, 0.05, field40)
        b = integrate_curve(z, 5.0, 0.025, field40)
        if np.abs(a.positions - b.positions[::2]).max() > 1e-10:
            ratios.append(step_halving_ratio(tuple(z), 5.0, 0.05, field40))
        if len(ratios) == 8:
            break
    assert 4.0 <= np.median(ratios) <= 64.0


def test_ratio_stats_running_extremes():
    c = Curve((0.0, 0.0), np.arange(5.0), np.array([[0, 0], [1, 0], [1, 1], [3, 1], [3, 3.0]]), 1.0)
    rs = ratio_stats(c, checkpoints=[0, 1, 2, 3, 4])
    assert rs.skipped == [0.0]
    assert rs.ratios == [0.0, 1.0, 1 / 3, 1.0]
    assert rs.running_min == [0.0, 0.0, 0.0, 0.0]
    assert rs.running_max == [0.0, 1.0, 1.0, 1.0]
    assert dyadic_checkpoints(10) == [1, 2, 4, 8]


def test_crossing_and_position():
    c = integrate_curve((0.0, 0.0), 4.0, 0.5, ConstantField(0.5))
    assert crossing_time(c, 0, 1.25) == pytest.approx(2.5)
    assert crossing_time(c, 1, 10.0) is None
    np.testing.assert_allclose(position_at(c, 3.0), [1.5, 1.5])


def test_bad_arguments():
    with pytest.raises(ValueError):
        integrate_curve((0, 0), -1.0, 0.1, ConstantField(0.5))
    with pytest.raises(ValueError):
        integrate_curve((0, 0), 1.0, 0.0, ConstantField(0.5))

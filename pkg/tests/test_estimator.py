import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from channelfield import ChannelField
from channelfield._validation import InvalidArgumentError
from channelfield.mollify import FieldEvaluator

X = np.random.default_rng(0).uniform(0, 8, (50, 2))


def test_params_and_clone():
    est = ChannelField(alpha=1.3, seed=4)
    assert est.get_params()["alpha"] == 1.3
    c = clone(est)
    assert c.get_params() == est.get_params() and not hasattr(c, "view_")


def test_fit_transform_shapes():
    est = ChannelField(seed=1).fit(X)
    v = est.transform(X)
    assert v.shape == (50, 2)
    assert np.allclose(v.sum(axis=1), 1.0)
    assert np.all((v >= 0) & (v <= 1))
    assert set(np.unique(est.predict(X))) <= {0, 1, 2}
    assert est.raw_field(X).shape == (50, 2)
    assert est.window_.x0 == pytest.approx(X[:, 0].min() - 1.0)


def test_deterministic_and_matches_evaluator():
    a = ChannelField(seed=3).fit_transform(X)
    est = ChannelField(seed=3).fit(X)
    np.testing.assert_array_equal(a, est.transform(X))
    ev = FieldEvaluator(est.view_)
    np.testing.assert_allclose(ev(X[0]), a[0], atol=1e-12)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ChannelField().transform(X)


def test_invalid_input():
    with pytest.raises(InvalidArgumentError):
        ChannelField().fit(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        ChannelField().fit(np.array([[0.0, np.nan]]))
    with pytest.raises(InvalidArgumentError):
        ChannelField(alpha=2.5).fit(X)
    with pytest.raises(InvalidArgumentError):
        ChannelField(margin=0.2).fit(X)
    est = ChannelField().fit(X)
    with pytest.raises(Exception):
        est.transform(np.array([[100.0, 100.0]]))

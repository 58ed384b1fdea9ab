"""A scikit-learn style wrapper around one sampled field.

``fit`` samples a configuration whose window covers the query points plus a
margin; ``transform`` evaluates the mollified field and ``predict`` the
direction of the selected domain (0 where no domain covers the point).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import InvalidArgumentError, check_alpha, check_epsilon, check_positive_int
from .geometry import Rect
from .mollify import MollifierSpec, SUPPORT, v_at
from .pointfield import IntensityParams, sample_configuration
from .tessellation import TessellationView


class ChannelField(TransformerMixin, BaseEstimator):
    """Sample the random field on a window fitted to ``X``.

    Parameters
    ----------
    alpha : float, default=1.5
        Pareto exponent of the strengths, in (1, 2).
    epsilon : float, default=1e-6
        Bound on the intensity mass dropped by truncation.
    seed : int, default=0
        Seed of the Philox stream.
    quadrature_order : int, default=32
        Gauss-Legendre nodes per piece of the mollifier support.
    quadrature : {"composite", "tensor"}, default="composite"
    margin : float, default=1.0
        Padding added around the bounding box of ``X``; at least the
        mollifier support so that every query stays valid.

    Attributes
    ----------
    config_ : Configuration
    view_ : TessellationView
    window_ : Rect
    n_features_in_ : int
    """

    def __init__(self, alpha=1.5, epsilon=1e-6, seed=0, quadrature_order=32, quadrature="composite", margin=1.0):
        self.alpha = alpha
        self.epsilon = epsilon
        self.seed = seed
        self.quadrature_order = quadrature_order
        self.quadrature = quadrature
        self.margin = margin

    def _check_X(self, X):
        X = check_array(X, dtype=float, ensure_all_finite=True)
        if X.shape[1] != 2:
            raise InvalidArgumentError(f"X must have two columns, got {X.shape[1]}")
        return X

    def fit(self, X, y=None):
        """Sample a configuration covering ``X`` and build its selector index."""
        X = self._check_X(X)
        alpha = check_alpha(self.alpha)
        eps = check_epsilon(self.epsilon)
        check_positive_int(self.quadrature_order, "quadrature_order")
        if not float(self.margin) > SUPPORT:
            raise InvalidArgumentError(f"margin must exceed {SUPPORT}")
        m = float(self.margin)
        lo, hi = X.min(axis=0), X.max(axis=0)
        self.window_ = Rect(lo[0] - m, hi[0] + m, lo[1] - m, hi[1] + m)
        self.config_ = sample_configuration(self.window_, eps, IntensityParams(alpha), seed=int(self.seed))
        self.view_ = TessellationView(self.config_)
        self.spec_ = MollifierSpec(self.quadrature_order, self.quadrature)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        """Mollified field ``v(x)``, shape ``(n, 2)``."""
        check_is_fitted(self, "view_")
        X = self._check_X(X)
        return np.array([v_at(x, self.view_, self.spec_) for x in X]).reshape(-1, 2)

    def predict(self, X):
        """Direction ``sigma`` of the selected domain, 0 on the empty value."""
        check_is_fitted(self, "view_")
        X = self._check_X(X)
        idx = self.view_.phi_many(X)
        sig = np.asarray(self.config_.sigma, dtype=int)
        return np.where(idx >= 0, sig[np.maximum(idx, 0)], 0)

    def raw_field(self, X):
        """Unmollified field, shape ``(n, 2)``."""
        check_is_fitted(self, "view_")
        X = self._check_X(X)
        return np.array([self.view_.v_tilde_index(int(i)) for i in self.view_.phi_many(X)]).reshape(-1, 2)

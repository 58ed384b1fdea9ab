"""Mixing diagnostics: the analytic overlap bound and ensemble statistics.

Shifting a window ``L_N = [-N, N]^2`` by ``z = (z1, 0)`` with ``z1 > 4N``,
the only marked points whose domains meet both the window and its shift are
long horizontal domains.  Their intensity mass is bounded by

    (N + 1) * int_1^inf alpha xi^-alpha exp(-(z1 - 2N)/xi) dxi,

which is evaluated here by quadrature, by importance-sampled Monte Carlo
and against sampled configurations.  Empirical mixing uses the indicator
that the selected domain at a point is horizontal.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, stats

from ._rng import child_seeds, make_rng, rng_from_seq
from ._validation import (
    InsufficientSampleError,
    InvalidArgumentError,
    OutOfWindowError,
    check_alpha,
    check_positive,
    check_positive_int,
)
from .ensemble import Level0Data
from .geometry import Rect
from .pointfield import IntensityParams, _tail_integral, sample_configuration
from .tessellation import TessellationView

REPORT_VERSION = 1
DEFAULT_LAGS = ((0.0, 0.0), (5.0, 0.0), (10.0, 0.0), (20.0, 0.0), (40.0, 0.0))
MIN_ENSEMBLE = 100
MIN_EVENTS = 200


def _check_regime(N: float, z1: float) -> tuple[float, float]:
    N = check_positive(N, "N")
    z1 = float(z1)
    if not (math.isfinite(z1) and z1 > 4.0 * N):
        raise InvalidArgumentError(f"need z1 > 4N, got z1={z1!r}, N={N!r}")
    return N, z1


def overlap_bound(N: float, z1: float, alpha: float = 1.5) -> float:
    """Quadrature of the overlap bound for lag ``(z1, 0)``.

    Raises
    ------
    InvalidArgumentError
        If ``z1 <= 4N``.
    """
    N, z1 = _check_regime(N, z1)
    a = check_alpha(alpha)
    d = z1 - 2.0 * N
    # substitute u = 1/xi to get a finite interval
    val, _ = integrate.quad(lambda u: a * u ** (a - 2.0) * math.exp(-d * u), 0.0, 1.0, epsabs=0, epsrel=1e-12, limit=200)
    return (N + 1.0) * val


def overlap_bound_closed(N: float, z1: float, alpha: float = 1.5) -> float:
    """Same bound through the regularized incomplete gamma function."""
    N, z1 = _check_regime(N, z1)
    return (N + 1.0) * float(_tail_integral(z1 - 2.0 * N, check_alpha(alpha)))


def overlap_mass_exact(N: float, z1: float, alpha: float = 1.5) -> float:
    """Exact mass of points whose domains meet both ``L_N`` and ``L_N + (z1, 0)``.

    Only horizontal domains with footprint rows in ``[-N-1, N]`` qualify, so
    the cross length is ``2N + 1`` instead of the bound's ``2N + 2``.
    """
    N, z1 = _check_regime(N, z1)
    return (N + 0.5) * float(_tail_integral(z1 - 2.0 * N, check_alpha(alpha)))


@dataclass
class MCEstimate:
    value: float
    se: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def overlap_superset_mc(N: float, z1: float, alpha: float = 1.5, n: int = 10**6, seed: int = 0) -> MCEstimate:
    """Importance-sampled mass of the horizontal superset of the overlap set.

    Strengths are drawn from ``Par(alpha - 1)`` and integrated against the
    footprint range they can span.
    """
    N, z1 = _check_regime(N, z1)
    a = check_alpha(alpha)
    n = check_positive_int(n, "n")
    rng = make_rng(seed)
    xi = (1.0 - rng.random(n)) ** (-1.0 / (a - 1.0))
    w = (N + 1.0) * a / (a - 1.0) * np.exp(-(z1 - 2.0 * N) / xi)
    return MCEstimate(float(w.mean()), float(w.std(ddof=1) / math.sqrt(n)), n)


def overlap_mass_mc(
    N: float, z1: float, alpha: float = 1.5, n: int = 2000, seed: int = 0, epsilon: float = 1e-6
) -> MCEstimate:
    """Mean number of sampled domains meeting both ``L_N`` and its shift by ``(z1, 0)``."""
    N, z1 = _check_regime(N, z1)
    a = check_alpha(alpha)
    n = check_positive_int(n, "n")
    window = Rect(-N, z1 + N, -N, N)
    counts = np.empty(n)
    for k, seq in enumerate(child_seeds(seed, n)):
        cfg = sample_configuration(window, epsilon, IntensityParams(a), seed=k, rng=rng_from_seq(seq))
        b = cfg.domain_bounds()
        in_row = (b[:, 2] <= N) & (b[:, 3] >= -N)
        both = in_row & (b[:, 0] <= N) & (b[:, 1] >= -N) & (b[:, 0] <= z1 + N) & (b[:, 1] >= z1 - N)
        counts[k] = np.count_nonzero(both)
    se = counts.std(ddof=1) / math.sqrt(n) if n > 1 else math.inf
    return MCEstimate(float(counts.mean()), float(se), n)


# ----------------------------------------------------------------------------
# empirical mixing


def sigma_indicator(view: TessellationView, points: np.ndarray) -> np.ndarray:
    """``1{sigma(phi(x)) = 1}``; zero where no domain covers ``x``."""
    idx = view.phi_many(points)
    sig = np.asarray(view.config.sigma)
    return np.where(idx >= 0, sig[np.maximum(idx, 0)] == 1, False).astype(float)


@dataclass
class MixingReport:
    """Covariance of a field observable against lag.

    Attributes
    ----------
    lags : list of (float, float)
        Displacements, sorted by l1 norm.
    correlations : list of float
        Estimated covariances ``Cov(g(x), g(x + z))``.
    standard_errors : list of float
        Config-clustered standard errors.
    step_se : list of float
        Paired standard errors of consecutive differences.
    decay_se : float
        Paired standard error of first nonzero lag minus last lag.
    analytic_bounds : list of float or None
        Overlap bound for ``N = 1`` where the lag satisfies its regime.
    null_correlations, null_standard_errors : list of float
        Same estimator with configurations paired at random.
    """

    lags: list
    correlations: list
    standard_errors: list
    step_se: list
    decay_se: float
    analytic_bounds: list
    null_correlations: list
    null_standard_errors: list
    n_configs: int
    n_points: int
    alpha: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        l1 = [abs(z[0]) + abs(z[1]) for z in self.lags]
        if any(b < a for a, b in zip(l1, l1[1:])):
            raise InvalidArgumentError("lags must be sorted by l1 norm")
        if any(not (s > 0) for s in self.standard_errors):
            raise InvalidArgumentError("standard errors must be positive")

    def _nonzero(self) -> list[int]:
        return [i for i, z in enumerate(self.lags) if abs(z[0]) + abs(z[1]) > 0]

    def monotone(self, k: float = 3.0) -> bool:
        """No increase between consecutive nonzero lags beyond ``k`` paired SEs."""
        nz = self._nonzero()
        for a, b in zip(nz, nz[1:]):
            if self.correlations[b] - self.correlations[a] > k * self.step_se[b]:
                return False
        return True

    def decays(self, k: float = 3.0) -> bool:
        """Covariance at the largest lag is ``k`` SEs below the smallest nonzero lag."""
        nz = self._nonzero()
        if len(nz) < 2:
            return False
        return self.correlations[nz[0]] - self.correlations[nz[-1]] > k * self.decay_se

    def null_consistent(self, k: float = 3.0) -> bool:
        return all(abs(c) <= k * s for c, s in zip(self.null_correlations, self.null_standard_errors))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["version"] = REPORT_VERSION
        d["lags"] = [list(z) for z in self.lags]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_default)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["z1", "z2", "l1", "covariance", "se", "null_covariance", "null_se", "bound"])
        for z, c, s, nc, ns, b in zip(
            self.lags, self.correlations, self.standard_errors, self.null_correlations,
            self.null_standard_errors, self.analytic_bounds,
        ):
            w.writerow([_g(z[0]), _g(z[1]), _g(abs(z[0]) + abs(z[1])), _g(c), _g(s), _g(nc), _g(ns),
                        "" if b is None else _g(b)])
        return buf.getvalue()

    def write(self, directory) -> tuple[Path, Path]:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        pj, pc = d / "mixing.json", d / "mixing.csv"
        pj.write_text(self.to_json() + "\n")
        pc.write_text(self.to_csv())
        return pj, pc


def _g(v) -> str:
    return format(float(v), ".17g")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o))


def default_base_points(window: Rect, lags: Sequence, spacing: float = 3.0) -> np.ndarray:
    """Column of base points whose shifts by every lag stay in ``window``."""
    lags = np.asarray(lags, dtype=float).reshape(-1, 2)
    x0 = window.x0 + 1.0 - min(0.0, lags[:, 0].min())
    y_lo = window.y0 + 1.0 - min(0.0, lags[:, 1].min())
    y_hi = window.y1 - 1.0 - max(0.0, lags[:, 1].max())
    if x0 + max(0.0, lags[:, 0].max()) > window.x1 - 1.0 or y_hi < y_lo:
        raise OutOfWindowError("window too small for the requested lags")
    ys = np.arange(y_lo, y_hi + 1e-12, spacing)
    return np.column_stack([np.full(len(ys), x0), ys])


def _cov_stats(X: np.ndarray, Y: np.ndarray) -> tuple[float, np.ndarray]:
    """Pooled covariance and its per-config influence values."""
    mx, my = X.mean(), Y.mean()
    cov = float(np.mean((X - mx) * (Y - my)))
    psi = ((X - mx) * (Y - my)).mean(axis=1) - cov
    return cov, psi


def _se(psi: np.ndarray, floor: float) -> float:
    n = len(psi)
    return max(float(psi.std(ddof=1) / math.sqrt(n)), floor)


def empirical_mixing(
    ensemble: Sequence,
    observable: Callable | None = None,
    lags: Sequence = DEFAULT_LAGS,
    base_points: np.ndarray | None = None,
    null_seed: int = 0,
    bound_N: float = 1.0,
) -> MixingReport:
    """Estimate ``Cov(g(field at x), g(field at x + z))`` across an ensemble.

    Parameters
    ----------
    ensemble : sequence of Configuration
        Independent samples sharing one window.
    observable : callable, optional
        ``g(view, points) -> values``; defaults to :func:`sigma_indicator`.
    lags : sequence of (z1, z2)
        Sorted by l1 norm in the report.
    base_points : (m, 2) array, optional
        Query points; defaults to a vertical column fitted to the window.

    Raises
    ------
    InsufficientSampleError
        With fewer than 100 configurations.
    """
    configs = list(ensemble)
    n = len(configs)
    if n < MIN_ENSEMBLE:
        raise InsufficientSampleError(f"need at least {MIN_ENSEMBLE} configurations, got {n}")
    g = sigma_indicator if observable is None else observable
    lag_arr = np.asarray(lags, dtype=float).reshape(-1, 2)
    order = np.argsort(np.abs(lag_arr).sum(axis=1), kind="stable")
    lag_arr = lag_arr[order]
    window = configs[0].window
    base = default_base_points(window, lag_arr) if base_points is None else np.asarray(base_points, dtype=float)
    m = len(base)

    X = np.empty((n, m))
    Ys = np.empty((len(lag_arr), n, m))
    for i, cfg in enumerate(configs):
        view = TessellationView(cfg)
        X[i] = g(view, base)
        for j, z in enumerate(lag_arr):
            Ys[j, i] = g(view, base + z)

    # pair configs along a random derangement for the null
    rng = make_rng(null_seed)
    perm = rng.permutation(n)
    partner = np.empty(n, dtype=int)
    partner[perm] = np.roll(perm, 1)

    floor = 1.0 / (n * m)
    covs, ses, psis, ncovs, nses = [], [], [], [], []
    for j in range(len(lag_arr)):
        c, psi = _cov_stats(X, Ys[j])
        covs.append(c)
        ses.append(_se(psi, floor))
        psis.append(psi)
        nc, npsi = _cov_stats(X, Ys[j][partner])
        ncovs.append(nc)
        nses.append(_se(npsi, floor))

    step_se = [math.nan] + [_se(psis[j] - psis[j - 1], floor) for j in range(1, len(psis))]
    nz = [j for j, z in enumerate(lag_arr) if np.abs(z).sum() > 0]
    decay_se = _se(psis[nz[0]] - psis[nz[-1]], floor) if len(nz) >= 2 else math.nan
    bounds = []
    for z in lag_arr:
        l1 = float(np.abs(z).sum())
        bounds.append(overlap_bound(bound_N, l1, configs[0].alpha) if l1 > 4 * bound_N else None)
    return MixingReport(
        lags=[(float(z[0]), float(z[1])) for z in lag_arr],
        correlations=covs,
        standard_errors=ses,
        step_se=step_se,
        decay_se=decay_se,
        analytic_bounds=bounds,
        null_correlations=ncovs,
        null_standard_errors=nses,
        n_configs=n,
        n_points=m,
        alpha=float(configs[0].alpha),
    )


def mixing_ensemble(
    n: int, seed: int = 0, alpha: float = 1.5, max_lag: float = 40.0, height: float = 30.0, epsilon: float = 1e-6
) -> list:
    """Independent configurations on ``[0, max_lag + 2] x [0, height]``."""
    n = check_positive_int(n, "n")
    window = Rect(0.0, max_lag + 2.0, 0.0, height)
    params = IntensityParams(check_alpha(alpha))
    return [
        sample_configuration(window, epsilon, params, seed=k, rng=rng_from_seq(s))
        for k, s in enumerate(child_seeds(seed, n))
    ]


# ----------------------------------------------------------------------------
# strong Markov property


@dataclass
class MarkovTestReport:
    """Goodness of fit of post-stopping counts and their independence from the past."""

    n_events: int
    expected_mean: float
    mean_post: float
    chi2: float
    dof: int
    p_value: float
    bins: list
    observed: list
    expected: list
    correlation: float
    correlation_p: float
    degenerate: bool = False

    def passed(self, level: float = 0.01) -> bool:
        if self.degenerate:
            return self.mean_post == 0.0
        return self.p_value > level and self.correlation_p > level

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed()
        return d


def _box_area(box) -> float:
    x0, x1, y0, y1 = box
    return max(0.0, x1 - x0) * max(0.0, y1 - y0)


def poisson_bins(mean: float, n: int, min_expected: float = 5.0) -> list[tuple[int, int]]:
    """Merge Poisson cells from both tails until each expects ``min_expected``.

    Returns ``(lo, hi)`` count ranges, the last one open (``hi = -1``).
    """
    kmax = int(stats.poisson.ppf(1 - 1e-12, mean)) + 2
    pm = stats.poisson.pmf(np.arange(kmax + 1), mean) * n
    bins = []
    lo, acc = 0, 0.0
    for k in range(kmax + 1):
        acc += pm[k]
        if acc >= min_expected:
            bins.append([lo, k])
            lo, acc = k + 1, 0.0
    if not bins:
        return [(0, -1)]
    bins[-1][1] = -1  # absorb the upper tail
    return [tuple(b) for b in bins]


def strong_markov_test(
    ensemble: Level0Data, box_spec: tuple | None = None, min_events: int = MIN_EVENTS
) -> MarkovTestReport:
    """Post-stopping footprint counts versus their unconditional Poisson law.

    Parameters
    ----------
    ensemble : Level0Data
        Output of :func:`channelfield.ensemble.level0_ensemble`; the
        stopping time is the level-1 blocking abscissa on ``B1``.
    box_spec : (post_box, pre_box), optional
        Must match the boxes the ensemble was run with.

    Raises
    ------
    InsufficientSampleError
        With fewer than ``min_events`` observed stopping events.
    """
    if box_spec is not None:
        post_box, pre_box = (tuple(map(float, b)) for b in box_spec)
        if post_box != tuple(ensemble.post_box) or pre_box != tuple(ensemble.pre_box):
            raise InvalidArgumentError("box_spec differs from the boxes used by the ensemble")
    ok = ensemble.post_count >= 0
    n = int(np.count_nonzero(ok))
    if n < min_events:
        rate = n / max(ensemble.n, 1)
        hint = f"; at the observed rate about {math.ceil(min_events / rate)} replicas are needed" if rate > 0 else ""
        raise InsufficientSampleError(f"only {n} stopping events, need {min_events}{hint}")
    post = ensemble.post_count[ok].astype(float)
    pre = ensemble.pre_count[ok].astype(float)
    # footprints have unit intensity per unit area
    mean = _box_area(ensemble.post_box)
    if mean == 0.0:
        return MarkovTestReport(n, 0.0, float(post.mean()), 0.0, 0, 1.0, [], [], [], 0.0, 1.0, degenerate=True)
    bins = poisson_bins(mean, n)
    obs, exp = [], []
    for lo, hi in bins:
        upper = np.inf if hi < 0 else hi
        obs.append(int(np.count_nonzero((post >= lo) & (post <= upper))))
        p_hi = 1.0 if hi < 0 else stats.poisson.cdf(hi, mean)
        p_lo = stats.poisson.cdf(lo - 1, mean) if lo > 0 else 0.0
        exp.append(float(n * (p_hi - p_lo)))
    chi2, p = stats.chisquare(obs, exp)
    if post.std() > 0 and pre.std() > 0:
        corr, corr_p = stats.pearsonr(pre, post)
    else:
        corr, corr_p = 0.0, 1.0
    return MarkovTestReport(
        n_events=n,
        expected_mean=mean,
        mean_post=float(post.mean()),
        chi2=float(chi2),
        dof=len(bins) - 1,
        p_value=float(p),
        bins=[list(b) for b in bins],
        observed=obs,
        expected=exp,
        correlation=float(corr),
        correlation_p=float(corr_p),
    )

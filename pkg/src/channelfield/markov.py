"""Blocking rates, strength kernel, killed strength chain and related statistics.

Notation: ``I_c(zeta) = int_zeta^inf exp(-c/xi) alpha xi^-alpha dxi``.  With
``s = alpha - 1`` and ``P`` the regularized lower incomplete gamma function,
``I_c(zeta) = alpha c^-s Gamma(s) P(s, c/zeta)`` and
``I_0(zeta) = alpha zeta^-s / s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special

from ._rng import make_rng
from ._validation import InvalidArgumentError, check_alpha, check_positive, check_positive_int, check_zeta

DEFAULT_KERNEL_EXPONENT = 2


# ---------------------------------------------------------------------------
# tail integrals


def tail_integral_closed(c, zeta, alpha: float):
    """``I_c(zeta)`` in closed form, vectorized over ``c`` and ``zeta``."""
    c = np.asarray(c, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    s = alpha - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = alpha * c ** (-s) * special.gamma(s) * special.gammainc(s, c / zeta)
    val = np.where(c == 0, alpha * zeta ** (-s) / s, val)
    return val if val.ndim else float(val)


def _tail_series(f_kind: str, T: float, alpha: float, terms: int = 40) -> float:
    """``int_T^inf f(xi) alpha xi^-alpha dxi`` by expanding the exponentials in ``1/xi``."""
    total = 0.0
    for k in range(terms):
        # coefficient of xi^-k in f
        if f_kind == "e2":
            coef = (-2.0) ** k / math.factorial(k)
        elif f_kind == "e1-e2":
            coef = ((-1.0) ** k - (-2.0) ** k) / math.factorial(k)
        elif f_kind == "1-e1":
            coef = 0.0 if k == 0 else -((-1.0) ** k) / math.factorial(k)
        else:
            raise ValueError(f_kind)
        total += coef * alpha * T ** (1.0 - alpha - k) / (alpha + k - 1.0)
    return total


_INTEGRANDS = {
    "e2": lambda x: math.exp(-2.0 / x),
    "e1-e2": lambda x: math.exp(-1.0 / x) - math.exp(-2.0 / x),
    "1-e1": lambda x: -math.expm1(-1.0 / x),
}


def _weighted_tail(f_kind: str, lo: float, alpha: float, hi: float = math.inf) -> float:
    """``int_lo^hi f(xi) alpha xi^-alpha dxi`` by Gauss-Kronrod on ``[lo, T]`` plus a series tail."""
    f = _INTEGRANDS[f_kind]
    T = max(100.0 * lo, 1e3) if math.isinf(hi) else hi

    # integrate in log(xi) so the heavy tail is well resolved
    def g(s):
        x = math.exp(s)
        return f(x) * alpha * x ** (1.0 - alpha)

    body, _ = integrate.quad(g, math.log(lo), math.log(T), epsabs=0.0, epsrel=1e-13, limit=200)
    if math.isinf(hi):
        body += _tail_series(f_kind, T, alpha)
    return body


def lambda_j(zeta: float, j: int, alpha: float = 1.5) -> float:
    """Rate of blocking class ``j`` for a channel of strength ``zeta``.

    ``lambda_0 = 1/2 int e^{-2/xi}``, ``lambda_1 = 1/2 int (e^{-1/xi} - e^{-2/xi})``,
    ``lambda_2 = 1/2 int (1 - e^{-1/xi}) + zeta^-alpha / 2`` and
    ``lambda_3 = zeta^-alpha``, all integrals against ``alpha xi^-alpha`` on
    ``[zeta, inf)``.
    """
    zeta = check_zeta(zeta)
    alpha = check_alpha(alpha)
    if j == 0:
        return 0.5 * _weighted_tail("e2", zeta, alpha)
    if j == 1:
        return 0.5 * _weighted_tail("e1-e2", zeta, alpha)
    if j == 2:
        return 0.5 * _weighted_tail("1-e1", zeta, alpha) + 0.5 * zeta ** (-alpha)
    if j == 3:
        return zeta ** (-alpha)
    raise InvalidArgumentError(f"j must be 0..3, got {j!r}")


def lambdas_closed(zeta, alpha: float = 1.5) -> np.ndarray:
    """All four rates in closed form; shape ``(4,)`` or ``(4, n)``."""
    z = np.asarray(zeta, dtype=float)
    I0 = tail_integral_closed(0.0, z, alpha)
    I1 = tail_integral_closed(1.0, z, alpha)
    I2 = tail_integral_closed(2.0, z, alpha)
    za = z ** (-alpha)
    return np.array([0.5 * I2, 0.5 * (I1 - I2), 0.5 * (I0 - I1) + 0.5 * za, za])


def rate_sum_formula(zeta, alpha: float = 1.5):
    z = np.asarray(zeta, dtype=float)
    return alpha / (2.0 * (alpha - 1.0)) * z ** (1.0 - alpha) + 1.5 * z ** (-alpha)


@dataclass(frozen=True)
class RateTable:
    alpha: float
    zeta: float
    lam: tuple[float, float, float, float]
    r_norm: float

    @property
    def total(self) -> float:
        return float(sum(self.lam))

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "zeta": self.zeta, "lambda": list(self.lam), "r_norm": self.r_norm}


def rate_table(zeta: float, alpha: float = 1.5) -> RateTable:
    lam = tuple(lambda_j(zeta, j, alpha) for j in range(4))
    return RateTable(alpha, float(zeta), lam, 1.0 / (sum(lam) + 1.0 / zeta))


def r_norm(zeta, alpha: float = 1.5):
    """Mean gap to the next blocking, ``1 / (sum_j lambda_j + 1/zeta)``."""
    z = np.asarray(zeta, dtype=float)
    return 1.0 / (rate_sum_formula(z, alpha) + 1.0 / z)


def lambda0_split(zeta: float, a: float, alpha: float = 1.5) -> tuple[float, float]:
    """Complete-blocking rate split at strength ``a * zeta``: ``(above, below)``."""
    zeta = check_zeta(zeta)
    alpha = check_alpha(alpha)
    if not a > 1.0:
        raise InvalidArgumentError("a must exceed 1")
    plus = 0.5 * _weighted_tail("e2", a * zeta, alpha)
    minus = 0.5 * _weighted_tail("e2", zeta, alpha, hi=a * zeta)
    return plus, minus


def exact_block_ratio(zeta, alpha: float = 1.5):
    """Probability that the next blocking event is complete, ``lambda_0 / (sum + 1/zeta)``."""
    z = np.asarray(check_zeta(zeta), dtype=float)
    lam = lambdas_closed(z, alpha)
    val = lam[0] / (lam.sum(axis=0) + 1.0 / z)
    return val if val.ndim else float(val)


# ---------------------------------------------------------------------------
# strength kernel


def _check_k(k: int) -> float:
    if k not in (1, 2):
        raise InvalidArgumentError("kernel exponent must be 1 or 2")
    return float(k)


def q_tail(zeta, a, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT):
    """``Q(zeta, [a zeta, inf))``: weight ``exp(-k/(a' zeta)) a'^-alpha`` on ``a' >= 1``."""
    z = np.asarray(check_zeta(zeta), dtype=float)
    a_arr = np.asarray(a, dtype=float)
    if np.any(a_arr < 1.0):
        raise InvalidArgumentError("a must be >= 1")
    kk = _check_k(k)
    s = alpha - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = special.gammainc(s, kk / (a_arr * z)) / special.gammainc(s, kk / z)
    val = np.where(np.isinf(a_arr), 0.0, np.clip(val, 0.0, 1.0))
    return val if val.ndim else float(val)


def q_tail_quad(zeta: float, a: float, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT) -> float:
    """Independent quadrature of the ratio defining :func:`q_tail`."""
    kk = _check_k(k)

    def num(lo):
        # a' = lo * exp(s)
        f = lambda s: math.exp(-kk / (lo * math.exp(s) * zeta)) * (lo * math.exp(s)) ** (1.0 - alpha)
        v, _ = integrate.quad(f, 0.0, 60.0, epsabs=0, epsrel=1e-12, limit=200)
        return v + lo ** (1.0 - alpha) * math.exp(60.0 * (1.0 - alpha)) / (alpha - 1.0)

    return num(a) / num(1.0)


def _invert_q(zeta: float, u: float, alpha: float, kk: float) -> float:
    f = lambda la: math.log(max(q_tail(zeta, math.exp(la), alpha, int(kk)), 1e-300)) - math.log(u)
    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
    return math.exp(optimize.brentq(f, 0.0, hi, xtol=1e-12, rtol=1e-12))


def sample_ratio(zeta, u, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT) -> np.ndarray:
    """Invert ``q_tail(zeta, a) = u`` for ``a``, vectorized over ``zeta`` and ``u``."""
    kk = _check_k(k)
    z = np.asarray(zeta, dtype=float)
    u = np.asarray(u, dtype=float)
    s = alpha - 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        target = u * special.gammainc(s, kk / z)
        inv = special.gammaincinv(s, target)
        a = kk / (z * inv)
    a = np.atleast_1d(np.asarray(a, dtype=float)).copy()
    bad = ~np.isfinite(a) | (a < 1.0) | (np.atleast_1d(target) <= 0)
    if np.any(bad):
        zb = np.broadcast_to(z, np.broadcast(z, u).shape).ravel()
        ub = np.broadcast_to(u, np.broadcast(z, u).shape).ravel()
        for i in np.nonzero(bad.ravel())[0]:
            if ub[i] >= 1.0:
                a.flat[i] = 1.0
            elif ub[i] <= 0.0:
                a.flat[i] = math.inf
            elif special.gammainc(s, kk / zb[i]) == 0.0:
                a.flat[i] = ub[i] ** (-1.0 / s)  # pure Pareto limit
            else:
                a.flat[i] = _invert_q(float(zb[i]), float(ub[i]), alpha, kk)
    a = np.maximum(a, 1.0)
    return a.reshape(np.broadcast(z, u).shape) if np.ndim(a) else a


def sample_Q(zeta, seed=None, size=None, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT, rng=None):
    """Draw ``zeta' = a * zeta`` from the strength kernel."""
    zeta = check_zeta(zeta)
    rng = make_rng(seed) if rng is None else rng
    shape = np.shape(zeta) if size is None else size
    u = 1.0 - rng.random(shape)  # in (0, 1]
    a = sample_ratio(zeta, u, alpha, k)
    out = np.asarray(zeta) * a
    return float(out) if np.ndim(out) == 0 else out


def couple_pareto(zeta, zeta_next, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT):
    """CDF-matching Par(alpha-1) minorant of the ratio ``zeta_next / zeta``.

    The kernel has an increasing likelihood ratio against Par(alpha-1), so
    ``chi <= zeta_next / zeta``; the final ``minimum`` only absorbs rounding.
    """
    z = np.asarray(check_zeta(zeta), dtype=float)
    zn = np.asarray(zeta_next, dtype=float)
    if np.any(zn < z):
        raise InvalidArgumentError("zeta_next must be >= zeta")
    ratio = zn / z
    chi = q_tail(z, ratio, alpha, k) ** (-1.0 / (alpha - 1.0))
    chi = np.minimum(chi, ratio)
    return chi if np.ndim(chi) else float(chi)


# ---------------------------------------------------------------------------
# acceptance mass of the widened-block check


def g_mu_closed(zeta, alpha: float = 1.5):
    """Closed form ``5/2 zeta^-alpha + alpha/(2(alpha-1)) zeta^(1-alpha)``."""
    z = np.asarray(zeta, dtype=float)
    return 2.5 * z ** (-alpha) + alpha / (2.0 * (alpha - 1.0)) * z ** (1.0 - alpha)


def g_mu(zeta: float, direction: int = 1, alpha: float = 1.5) -> float:
    """Mass of stronger points that fail the widened-block check, by quadrature.

    Direction 2 is the mirror image of direction 1, so both share one value.
    The first part counts parallel domains rooted in the unit-by-three box;
    the second counts perpendicular ones rooted below that reach the box.
    """
    zeta = check_zeta(zeta)
    alpha = check_alpha(alpha)
    if direction not in (1, 2):
        raise InvalidArgumentError("direction must be 1 or 2")
    # u = 1/xi turns both heavy tails into algebraic weights on [0, 1/zeta]
    strength, _ = integrate.quad(lambda u: alpha, 0.0, 1.0 / zeta, weight="alg", wvar=(alpha - 1.0, 0.0))
    parallel = 0.5 * 1.0 * 3.0 * strength
    # x2 in [-2, 0] always reaches; x2 = -2 - y with y > 0 needs r >= y / xi
    near = 0.5 * 2.0 * strength

    # int_0^inf exp(-y/xi) dy with y = xi s, evaluated by quadrature
    unit, _ = integrate.quad(lambda s: math.exp(-s), 0.0, np.inf, epsabs=0, epsrel=1e-13)
    far, _ = integrate.quad(lambda u: alpha * unit, 0.0, 1.0 / zeta, weight="alg", wvar=(alpha - 2.0, 0.0))
    return parallel + near + 0.5 * far


def g_mass(zeta, direction: int = 1, alpha: float = 1.5):
    """Probability that the widened-block check passes, ``exp(-mu)``."""
    if np.ndim(zeta):
        check_zeta(zeta)
        return np.exp(-g_mu_closed(zeta, alpha))
    return math.exp(-g_mu(zeta, direction, alpha))


# ---------------------------------------------------------------------------
# certification of the constants left open by the analysis


def certify_c1(alpha: float = 1.5, grid=None) -> float:
    """Smallest ``c1`` with ``ratio >= exp(-2/zeta)(1 - c1 zeta^(alpha-2))`` on a grid."""
    z = np.geomspace(1.0, 1e8, 400) if grid is None else np.asarray(grid, float)
    need = (1.0 - exact_block_ratio(z, alpha) * np.exp(2.0 / z)) * z ** (2.0 - alpha)
    return float(max(need.max(), 0.0))


def certify_c2(alpha: float = 1.5, grid=None) -> float:
    """Smallest ``c2`` with ``mu <= c2 zeta^(1-alpha)`` on a grid."""
    z = np.geomspace(1.0, 1e8, 400) if grid is None else np.asarray(grid, float)
    return float((g_mu_closed(z, alpha) * z ** (alpha - 1.0)).max())


def normalizer_constants(alpha: float = 1.5, grid=None) -> tuple[float, float]:
    """Bounds ``k1 <= r(xi) / xi^(alpha-1) <= k2`` over a grid."""
    z = np.geomspace(1.0, 1e8, 400) if grid is None else np.asarray(grid, float)
    q = r_norm(z, alpha) / z ** (alpha - 1.0)
    return float(q.min()), float(q.max())


# ---------------------------------------------------------------------------
# survival models


class ConstantPModel:
    """``p(zeta) = p`` everywhere."""

    def __init__(self, p: float):
        if not 0.0 <= p <= 1.0:
            raise InvalidArgumentError("p must lie in [0, 1]")
        self.p = float(p)

    def __call__(self, zeta):
        return np.full(np.shape(zeta), self.p) if np.ndim(zeta) else self.p


class TablePModel:
    """Piecewise-linear model in ``log zeta`` from tabulated values."""

    def __init__(self, zeta_grid, values):
        self.logz = np.log(np.asarray(zeta_grid, dtype=float))
        self.values = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
        if np.any(np.diff(self.logz) <= 0):
            raise InvalidArgumentError("zeta grid must be increasing")

    def __call__(self, zeta):
        z = np.asarray(zeta, dtype=float)
        with np.errstate(divide="ignore"):
            lz = np.log(np.minimum(z, 1e300))
        out = np.interp(lz, self.logz, self.values)
        return out if out.ndim else float(out)


def _expect_over_Q(f, zeta: float, alpha: float, kk: float) -> float:
    """``E f(a zeta)`` for ``a ~ Q(zeta, .)`` via the substitution ``u = a^(1-alpha)``."""
    s = alpha - 1.0
    w = lambda u: math.exp(-(kk / zeta) * u ** (1.0 / s))
    num, _ = integrate.quad(lambda u: w(u) * f(zeta * u ** (-1.0 / s)) if u > 0 else w(u), 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    den, _ = integrate.quad(w, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    return num / den


@lru_cache(maxsize=16)
def _exact_p_table(alpha: float, k: int):
    grid = np.concatenate([np.geomspace(1.0, 1e6, 600), np.geomspace(1e6, 1e300, 301)[1:]])
    vals = np.array(
        [exact_block_ratio(z, alpha) * _expect_over_Q(lambda x: math.exp(-float(g_mu_closed(x, alpha))), z, alpha, float(k)) for z in grid]
    )
    return grid, vals


class ExactPModel(TablePModel):
    """``p(zeta) = ratio(zeta) * E[g_mass(zeta')]`` with ``zeta' ~ Q(zeta, .)``.

    The expectation is a one-dimensional quadrature tabulated on a log grid
    and interpolated linearly in ``log zeta``.
    """

    def __init__(self, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT):
        self.alpha = check_alpha(alpha)
        self.k = int(_check_k(k))
        super().__init__(*_exact_p_table(self.alpha, self.k))

    def exact(self, zeta: float) -> float:
        return exact_block_ratio(zeta, self.alpha) * _expect_over_Q(
            lambda x: math.exp(-float(g_mu_closed(x, self.alpha))), float(zeta), self.alpha, float(self.k)
        )


class LowerBoundPModel:
    """``exp(-2/zeta)(1 - c1 zeta^(alpha-2))_+ E exp(-c2 zeta'^(1-alpha))``."""

    def __init__(self, c1: float, c2: float, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT):
        self.c1 = check_positive(c1, "c1")
        self.c2 = check_positive(c2, "c2")
        self.alpha = check_alpha(alpha)
        self.k = int(_check_k(k))
        grid = np.concatenate([np.geomspace(1.0, 1e6, 400), np.geomspace(1e6, 1e300, 201)[1:]])
        e = np.array([_expect_over_Q(lambda x: math.exp(-self.c2 * x ** (1.0 - alpha)), z, alpha, float(k)) for z in grid])
        self._table = TablePModel(grid, e)

    def __call__(self, zeta):
        z = np.asarray(zeta, dtype=float)
        front = np.exp(-2.0 / z) * np.clip(1.0 - self.c1 * z ** (self.alpha - 2.0), 0.0, None)
        out = np.clip(front * self._table(z), 0.0, 1.0)
        return out if out.ndim else float(out)


def p_lower(zeta: float, c1: float, c2: float, mc_samples: int = 10_000, seed: int = 0, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT) -> float:
    """Monte Carlo version of the lower-bound survival probability."""
    zeta = check_zeta(zeta)
    c1 = check_positive(c1, "c1")
    c2 = check_positive(c2, "c2")
    mc_samples = check_positive_int(mc_samples, "mc_samples")
    front = math.exp(-2.0 / zeta) * max(1.0 - c1 * zeta ** (alpha - 2.0), 0.0)
    if front == 0.0:
        return 0.0
    w = sample_Q(np.full(mc_samples, zeta), seed=seed, alpha=alpha, k=k)
    return float(min(max(front * np.mean(np.exp(-c2 * w ** (1.0 - alpha))), 0.0), 1.0))


# ---------------------------------------------------------------------------
# killed strength chain


@dataclass(frozen=True)
class ChainState:
    zeta: float
    e: float

    def __post_init__(self):
        if not self.zeta >= 1.0 or not self.e >= 0.0:
            raise InvalidArgumentError("live state needs zeta >= 1 and e >= 0")


class _Delta:
    def __repr__(self) -> str:
        return "Delta"


DELTA = _Delta()


def transition_sample(state, p_model, seed=None, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT, rng=None):
    """One step of the killed chain: die with probability ``1 - p(zeta)``."""
    if state is DELTA:
        return DELTA
    rng = make_rng(seed) if rng is None else rng
    u = rng.random()
    if u >= float(p_model(state.zeta)):
        return DELTA
    zn = sample_Q(state.zeta, rng=rng, alpha=alpha, k=k)
    return ChainState(float(zn), float(rng.exponential()))


_ZETA_CAP = 1e300


def sample_W_paths(zeta: float, n_steps: int, N: int, seed=None, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT, rng=None) -> np.ndarray:
    """``N`` strength paths ``W_0 = zeta, W_{j+1} ~ Q(W_j, .)``; shape ``(N, n_steps + 1)``.

    Paths are frozen at ``1e300`` once they get there; the survival
    probability is one to machine precision long before that.
    """
    rng = make_rng(seed) if rng is None else rng
    W = np.empty((N, n_steps + 1))
    W[:, 0] = zeta
    for j in range(n_steps):
        cur = W[:, j]
        nxt = cur * sample_ratio(cur, 1.0 - rng.random(N), alpha, k)
        W[:, j + 1] = np.minimum(nxt, _ZETA_CAP)
    return W


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float
    n: int

    def to_dict(self) -> dict:
        return {"value": self.value, "se": self.se, "n": self.n}


def survival_estimate(zeta: float, n_trunc: int, N: int, p_model, seed=0, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT) -> Estimate:
    """Monte Carlo mean of ``prod_{j < n_trunc} p(W_j)`` along kernel paths."""
    zeta = check_zeta(zeta)
    n_trunc = check_positive_int(n_trunc, "n_trunc")
    N = check_positive_int(N, "N")
    W = sample_W_paths(zeta, n_trunc - 1, N, seed=seed, alpha=alpha, k=k)
    prod = np.prod(p_model(W), axis=1)
    se = float(prod.std(ddof=1) / math.sqrt(N)) if N > 1 else 0.0
    return Estimate(float(prod.mean()), se, N)


def doob_first_ratio(zeta: float, n_trunc: int, N: int, p_model, seed=0, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT):
    """First-step ratios of free kernel paths with their Doob importance weights.

    The weight of a path is ``prod_{1 <= j < n_trunc} p(W_j)``, which makes
    the weighted law of ``W_1`` the law under the chain conditioned to
    survive ``n_trunc`` steps.
    """
    W = sample_W_paths(zeta, n_trunc - 1, N, seed=seed, alpha=alpha, k=k)
    weights = np.prod(p_model(W[:, 1:]), axis=1)
    return W[:, 1] / zeta, weights


def conditioned_first_ratio(zeta: float, n_trunc: int, N: int, p_model, seed=0, alpha: float = 1.5, k: int = DEFAULT_KERNEL_EXPONENT):
    """First-step ratios of killed-chain paths that survive ``n_trunc`` steps."""
    rng = make_rng(seed)
    W = sample_W_paths(zeta, n_trunc - 1, N, alpha=alpha, k=k, rng=rng)
    alive = np.all(rng.random(W.shape) < p_model(W), axis=1)
    return W[alive, 1] / zeta


# ---------------------------------------------------------------------------
# oscillation statistic


@dataclass
class FPaths:
    F: np.ndarray  # shape (paths, m_max)
    running_min: np.ndarray


def simulate_F(m_max: int, alpha: float = 1.5, seed=0, paths: int = 1) -> FPaths:
    """Accumulated past lengths over the next length, ``F_1 .. F_m_max``.

    ``Pi_1 = 1`` and ``Pi_i = chi_1 ... chi_{i-1}`` with Par(alpha-1) ``chi``;
    ``F_m = sum_{i <= 2m} Pi_i^(alpha-1) e_i / Pi_{2m+1}^(alpha-1)``.  Everything
    is carried in logs to avoid overflow.
    """
    m_max = check_positive_int(m_max, "m_max")
    alpha = check_alpha(alpha)
    rng = make_rng(seed)
    n = 2 * m_max + 1
    # chi^(alpha-1) ~ Par(1), i.e. 1/U
    log_chi_pow = -np.log(1.0 - rng.random((paths, n - 1)))
    log_e = np.log(rng.exponential(1.0, (paths, n - 1)))
    log_pi = np.concatenate([np.zeros((paths, 1)), np.cumsum(log_chi_pow, axis=1)], axis=1)
    terms = log_pi[:, :-1] + log_e
    acc = np.logaddexp.accumulate(terms, axis=1)
    idx = np.arange(1, m_max + 1)
    logF = acc[:, 2 * idx - 1] - log_pi[:, 2 * idx]
    F = np.exp(logF)
    return FPaths(F, np.minimum.accumulate(F, axis=1))

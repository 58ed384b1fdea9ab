"""Marked Poisson field: intensity, analytic masses and windowed sampling.

A marked point is ``eta = (x, r, xi, sigma)`` with footprint ``x`` in the
plane, length factor ``r ~ Exp(1)``, strength ``xi ~ Par(alpha)`` and a
direction ``sigma`` uniform on ``{1, 2}``.  The footprints have unit Lebesgue
intensity, so the full intensity is ``0.5 * alpha * exp(-r) * xi**(-alpha-1)``.
Each point owns the rectangle of length ``r * xi`` and width 1 that starts at
``x`` and points along ``e_sigma``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, optimize, special

from ._rng import RNG_NAME, make_rng
from ._validation import (
    InvalidArgumentError,
    check_alpha,
    check_epsilon,
)
from .geometry import Rect

FORMAT_NAME = "channelfield-config"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class IntensityParams:
    """Tail index of the strength marks, ``1 < alpha < 2``."""

    alpha: float = 1.5

    def __post_init__(self):
        check_alpha(self.alpha)

    @property
    def tail_mean(self) -> float:
        """``int_1^inf alpha * xi**-alpha dxi``, the mean of ``xi`` under Par(alpha)."""
        return self.alpha / (self.alpha - 1.0)


@dataclass(frozen=True, order=False)
class MarkedPoint:
    x: tuple[float, float]
    r: float
    xi: float
    sigma: int

    def __post_init__(self):
        object.__setattr__(self, "x", (float(self.x[0]), float(self.x[1])))
        if not (self.r >= 0 and self.xi >= 1 and self.sigma in (1, 2)):
            raise InvalidArgumentError(f"mark outside support: {self!r}")

    @property
    def key(self) -> tuple:
        """Total order used by the selector: larger tuple wins."""
        return (self.xi, self.x[0], self.x[1], self.sigma)

    @property
    def length(self) -> float:
        return self.r * self.xi

    def to_dict(self) -> dict:
        return {"x": list(self.x), "r": self.r, "xi": self.xi, "sigma": self.sigma}


def intensity_density(eta: MarkedPoint | tuple, params: IntensityParams) -> float:
    """Density of the intensity measure at a marked point.

    Accepts a :class:`MarkedPoint` or a raw ``(x, r, xi, sigma)`` tuple so that
    points off the support can be evaluated.
    """
    if isinstance(eta, MarkedPoint):
        r, xi = eta.r, eta.xi
    else:
        _, r, xi, _ = eta
    if r < 0 or xi < 1:
        return 0.0
    a = params.alpha
    return 0.5 * a * math.exp(-r) * xi ** (-a - 1.0)


def _tail_integral(pad, alpha: float):
    """``T(P) = int_1^inf alpha xi^-alpha exp(-P/xi) dxi`` via the lower incomplete gamma."""
    p = np.asarray(pad, dtype=float)
    s = alpha - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = alpha * p ** (-s) * special.gamma(s) * special.gammainc(s, p)
    val = np.where(p == 0, alpha / s, val)
    return float(val) if val.ndim == 0 else val


def mu_dinv_rect(rect: Rect, params: IntensityParams) -> float:
    """Intensity mass of all points whose domain meets ``rect``.

    Splitting by direction, a horizontal domain meets a ``w x h`` rectangle
    when its footprint lies in the rectangle widened by one below, or to the
    left at a distance the domain can span; the latter contributes
    ``int_1^inf alpha xi^-alpha dxi`` per unit of cross length.
    """
    w, h = rect.width, rect.height
    if not (w > 0 and h > 0) or not (math.isfinite(w) and math.isfinite(h)):
        raise InvalidArgumentError("rectangle must have positive finite width and height")
    a = params.alpha
    tail, _ = integrate.quad(lambda u: a * u ** (-a), 1.0, np.inf, epsabs=0, epsrel=1e-12)
    return 0.5 * (h + 1.0) * (w + tail) + 0.5 * (w + 1.0) * (h + tail)


def omitted_mass(window: Rect, pad: float, params: IntensityParams) -> float:
    """Mass of points farther than ``pad`` left/below the window that still reach it."""
    w, h = window.width, window.height
    return 0.5 * ((h + 1.0) + (w + 1.0)) * _tail_integral(pad, params.alpha)


def truncation_pad(window: Rect, epsilon: float, params: IntensityParams) -> float:
    """Smallest pad whose omitted mass is at most ``epsilon``."""
    epsilon = check_epsilon(epsilon)
    if not (window.width >= 0 and window.height >= 0):
        raise InvalidArgumentError("invalid window")

    def f(logp):
        return math.log(omitted_mass(window, math.exp(logp), params)) - math.log(epsilon)

    lo, hi = -30.0, 10.0
    while f(hi) > 0:
        hi *= 2.0
    if f(lo) <= 0:
        return math.exp(lo)
    logp = optimize.brentq(f, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=500)
    pad = math.exp(logp)
    # round up so the bound holds after rounding
    while omitted_mass(window, pad, params) > epsilon:
        pad = math.nextafter(pad, math.inf) * (1 + 1e-15)
    return pad


def expected_count(window: Rect, pad: float, params: IntensityParams) -> float:
    """Mean number of sampled points for a window and pad."""
    w, h = window.width, window.height
    reach = params.tail_mean - _tail_integral(pad, params.alpha)
    return 0.5 * (h + 1.0) * (w + reach) + 0.5 * (w + 1.0) * (h + reach)


@dataclass(frozen=True, eq=False)
class Configuration:
    """Finite sample of marked points relevant to ``window``.

    Coordinates are held in arrays; :attr:`points` materializes
    :class:`MarkedPoint` objects on demand.
    """

    x: np.ndarray
    r: np.ndarray
    xi: np.ndarray
    sigma: np.ndarray
    window: Rect
    alpha: float = 1.5
    truncation_epsilon: float = 0.0
    seed: int | None = None
    pad: float = math.inf
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.ascontiguousarray(np.asarray(self.x, dtype=float).reshape(-1, 2))
        r = np.ascontiguousarray(np.asarray(self.r, dtype=float).ravel())
        xi = np.ascontiguousarray(np.asarray(self.xi, dtype=float).ravel())
        sg = np.ascontiguousarray(np.asarray(self.sigma, dtype=np.int8).ravel())
        n = len(r)
        if not (x.shape[0] == n == len(xi) == len(sg)):
            raise InvalidArgumentError("mark arrays have inconsistent lengths")
        if n and (np.any(r < 0) or np.any(xi < 1) or np.any((sg != 1) & (sg != 2))):
            raise InvalidArgumentError("marks outside support r >= 0, xi >= 1, sigma in {1,2}")
        for arr in (x, r, xi, sg):
            arr.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "sigma", sg)

    def __len__(self) -> int:
        return len(self.r)

    @classmethod
    def from_points(cls, points, window: Rect, **kwargs) -> "Configuration":
        pts = list(points)
        return cls(
            x=np.array([p.x for p in pts], dtype=float).reshape(-1, 2),
            r=np.array([p.r for p in pts], dtype=float),
            xi=np.array([p.xi for p in pts], dtype=float),
            sigma=np.array([p.sigma for p in pts], dtype=np.int8),
            window=window,
            **kwargs,
        )

    def point(self, i: int) -> MarkedPoint:
        return MarkedPoint((self.x[i, 0], self.x[i, 1]), float(self.r[i]), float(self.xi[i]), int(self.sigma[i]))

    @property
    def points(self) -> list[MarkedPoint]:
        return [self.point(i) for i in range(len(self))]

    def domain_bounds(self) -> np.ndarray:
        """Array of ``(x0, x1, y0, y1)`` for every domain."""
        length = self.r * self.xi
        horiz = self.sigma == 1
        x0 = self.x[:, 0]
        y0 = self.x[:, 1]
        x1 = np.where(horiz, x0 + length, x0 + 1.0)
        y1 = np.where(horiz, y0 + 1.0, y0 + length)
        return np.column_stack([x0, x1, y0, y1])

    def is_distinct(self) -> bool:
        n = len(self)
        if n < 2:
            return True
        return len(np.unique(self.xi)) == n and len(np.unique(self.x, axis=0)) == n

    def header(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "window": list(self.window.bounds),
            "alpha": self.alpha,
            "epsilon": self.truncation_epsilon,
            "seed": self.seed,
            "pad": self.pad if math.isfinite(self.pad) else None,
            "rng": RNG_NAME,
            "count": len(self),
        }


def sample_configuration(
    window: Rect,
    epsilon: float,
    params: IntensityParams,
    seed: int,
    rng: np.random.Generator | None = None,
) -> Configuration:
    """Draw every marked point whose domain meets ``window``.

    Footprints inside the window widened by one below (horizontal domains) or
    to the left (vertical domains) always reach it.  For points outside, the
    distance ``y`` to the window and the strength are drawn jointly from
    their restricted law: ``xi ~ Par(alpha-1)``, ``y | xi ~ Exp(mean xi)`` and
    ``r = y/xi + Exp(1)``.  Points with ``y`` beyond the truncation pad are
    thinned away; their total mass is at most ``epsilon``.
    """
    epsilon = check_epsilon(epsilon)
    if not (window.width > 0 and window.height > 0) or not all(map(math.isfinite, window.bounds)):
        raise InvalidArgumentError("window must be a nondegenerate finite rectangle")
    a = params.alpha
    pad = truncation_pad(window, epsilon, params)
    rng = make_rng(seed) if rng is None else rng
    a0, b0, a1, b1 = window.bounds
    w, h = window.width, window.height

    parts = []
    for sigma in (1, 2):
        # (s, t) = (along, across) coordinates of the domain direction
        s0, s1, t0, t1 = (a0, a1, b0, b1) if sigma == 1 else (b0, b1, a0, a1)
        along, across = (w, h) if sigma == 1 else (h, w)
        n_in = rng.poisson(0.5 * along * (across + 1.0))
        s_in = rng.uniform(s0, s1, n_in)
        t_in = rng.uniform(t0 - 1.0, t1, n_in)
        r_in = rng.exponential(1.0, n_in)
        xi_in = (1.0 - rng.random(n_in)) ** (-1.0 / a)

        n_out = rng.poisson(0.5 * (across + 1.0) * params.tail_mean)
        xi_out = (1.0 - rng.random(n_out)) ** (-1.0 / (a - 1.0))
        y_out = xi_out * rng.exponential(1.0, n_out)
        r_out = y_out / xi_out + rng.exponential(1.0, n_out)
        t_out = rng.uniform(t0 - 1.0, t1, n_out)
        keep = (y_out <= pad) & (y_out > 0)
        s_out = s0 - y_out[keep]

        s = np.concatenate([s_in, s_out])
        t = np.concatenate([t_in, t_out[keep]])
        xy = np.column_stack([s, t]) if sigma == 1 else np.column_stack([t, s])
        parts.append((xy, np.concatenate([r_in, r_out[keep]]), np.concatenate([xi_in, xi_out[keep]]), sigma))

    x = np.concatenate([p[0] for p in parts])
    r = np.concatenate([p[1] for p in parts])
    xi = np.concatenate([p[2] for p in parts])
    sg = np.concatenate([np.full(len(p[1]), p[3], dtype=np.int8) for p in parts])
    config = Configuration(x, r, xi, sg, window, alpha=a, truncation_epsilon=epsilon, seed=int(seed), pad=pad)
    if not config.is_distinct():  # probability zero
        raise RuntimeError("sampled configuration violates distinctness")
    return config


def _fmt(v: float) -> str:
    v = float(v)
    if v == int(v) and abs(v) < 1e15:
        return repr(v)
    return format(v, ".17g")


def _json_num(v):
    return None if v is None else json.loads(_fmt(v)) if isinstance(v, float) else v


def dumps_configuration(config: Configuration) -> str:
    """Serialize as JSON lines; numbers carry 17 significant digits."""
    head = config.header()
    lines = [json.dumps(head, sort_keys=True)]
    for i in range(len(config)):
        lines.append(
            '{"x":[%s,%s],"r":%s,"xi":%s,"sigma":%d}'
            % (_fmt(config.x[i, 0]), _fmt(config.x[i, 1]), _fmt(config.r[i]), _fmt(config.xi[i]), config.sigma[i])
        )
    return "\n".join(lines) + "\n"


def write_configuration(config: Configuration, path) -> Path:
    path = Path(path)
    try:
        path.write_text(dumps_configuration(config))
    except OSError as exc:
        raise OSError(f"cannot write configuration to {path}: {exc}") from exc
    return path


def loads_configuration(text: str) -> Configuration:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidArgumentError("empty configuration file")
    head = json.loads(lines[0])
    if head.get("format") != FORMAT_NAME:
        raise InvalidArgumentError("missing configuration header")
    if int(head.get("version", -1)) != FORMAT_VERSION:
        raise InvalidArgumentError(f"unsupported format version {head.get('version')}")
    recs = [json.loads(ln) for ln in lines[1:]]
    pad = head.get("pad")
    return Configuration(
        x=np.array([r["x"] for r in recs], dtype=float).reshape(-1, 2),
        r=np.array([r["r"] for r in recs], dtype=float),
        xi=np.array([r["xi"] for r in recs], dtype=float),
        sigma=np.array([r["sigma"] for r in recs], dtype=np.int8),
        window=Rect.from_bounds(head["window"]),
        alpha=float(head.get("alpha", 1.5)),
        truncation_epsilon=float(head.get("epsilon") or 0.0),
        seed=head.get("seed"),
        pad=math.inf if pad is None else float(pad),
    )


def read_configuration(path) -> Configuration:
    return loads_configuration(Path(path).read_text())

"""Smooth bump density and the mollified field.

The smoothed field at ``x`` is the rho-weighted average of the raw field
over the square ``x + [-1/3, 0]^2``, so it only looks down and to the left.
The raw field is piecewise constant on rectangles, so each axis of the
support square is split at the edges of the domains that meet it (and at
its quarter points) and a Gauss-Legendre rule is applied on every piece.  The resulting discrete
weights are renormalized to sum to one, which keeps ``v1 + v2 = 1`` exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from ._validation import OutOfWindowError, check_point, check_positive_int
from .geometry import Rect
from .tessellation import TessellationView

SUPPORT = 1.0 / 3.0


def bump(t):
    """Standard bump ``exp(-1/(1-t^2))`` on ``|t| < 1``, zero elsewhere."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out if out.ndim else float(out)


@lru_cache(maxsize=1)
def bump_integral() -> float:
    val, _ = integrate.quad(lambda t: math.exp(-1.0 / (1.0 - t * t)), -1.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)
    return val


@lru_cache(maxsize=None)
def _gauss(order: int):
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class MollifierSpec:
    """Bump density on ``[-1/3, 0]^2``.

    Parameters
    ----------
    order : int
        Gauss-Legendre nodes per axis and per piece.
    method : {"composite", "tensor"}
        ``composite`` splits the support at domain edges before applying the
        rule; ``tensor`` uses one fixed tensor rule on the whole square.
    """

    order: int = 32
    method: str = "composite"

    def __post_init__(self):
        check_positive_int(self.order, "order")
        if self.method not in ("composite", "tensor"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def normalization(self) -> float:
        return (6.0 / bump_integral()) ** 2

    def density_1d(self, u):
        """Marginal density on ``[-1/3, 0]``."""
        return (6.0 / bump_integral()) * bump(6.0 * np.asarray(u, dtype=float) + 1.0)

    def masses(self, edges: np.ndarray) -> np.ndarray:
        """Gauss-Legendre masses of the marginal on consecutive pieces of ``edges``."""
        t, w = _gauss(self.order)
        a, b = edges[:-1, None], edges[1:, None]
        half = 0.5 * (b - a)
        nodes = half * t[None, :] + 0.5 * (a + b)
        return (half * w[None, :] * self.density_1d(nodes)).sum(axis=1)


def rho(u, spec: MollifierSpec = MollifierSpec()) -> float:
    """Product bump density ``c * b(6u1+1) * b(6u2+1)``."""
    u1, u2 = check_point(u, "u")
    return spec.normalization * bump(6.0 * u1 + 1.0) * bump(6.0 * u2 + 1.0)


def rho_total(spec: MollifierSpec = MollifierSpec(), order: int = 200) -> float:
    """Integral of rho over its support by a high-order rule."""
    m = spec.masses(np.array([-SUPPORT, 0.0])) if order == spec.order else MollifierSpec(order).masses(
        np.array([-SUPPORT, 0.0])
    )
    return float(m[0] ** 2)


# fixed cuts at the quarter points keep each piece away from the steep
# shoulders of the bump, where a single long piece converges slowly
_QUARTERS = (0.25, 0.5, 0.75)


def _axis_edges(lo: float, hi: float, cuts) -> np.ndarray:
    inner = [c for c in cuts if lo < c < hi]
    inner += [lo + q * (hi - lo) for q in _QUARTERS]
    return np.unique(np.array([lo, hi] + inner))


def v_at(x, view: TessellationView, spec: MollifierSpec = MollifierSpec()) -> np.ndarray:
    """Mollified field at ``x``; components are nonnegative and sum to one."""
    x1, x2 = check_point(x)
    S = Rect(x1 - SUPPORT, x1, x2 - SUPPORT, x2)
    if not S.within(view.window):
        raise OutOfWindowError(f"support square of ({x1}, {x2}) leaves the validity window")
    cand = view.domains_meeting(S, check=False)
    if not cand:
        return np.array([0.5, 0.5])
    top = cand[0]
    if S.inside_closed(view._x0[top], view._x1[top], view._y0[top], view._y1[top]):
        return view.v_tilde_index(top)

    if spec.method == "tensor":
        ex = np.array([S.x0, S.x1])
        ey = np.array([S.y0, S.y1])
        t, w = _gauss(spec.order)
        half = 0.5 * SUPPORT
        nx = half * t + (S.x0 + half)
        ny = half * t + (S.y0 + half)
        mx = half * w * spec.density_1d(nx - x1)
        my = half * w * spec.density_1d(ny - x2)
    else:
        ex = _axis_edges(S.x0, S.x1, [c for i in cand for c in (view._x0[i], view._x1[i])])
        ey = _axis_edges(S.y0, S.y1, [c for i in cand for c in (view._y0[i], view._y1[i])])
        mx = spec.masses(ex - x1)
        my = spec.masses(ey - x2)
        nx = 0.5 * (ex[:-1] + ex[1:])
        ny = 0.5 * (ey[:-1] + ey[1:])
    mx = mx / mx.sum()
    my = my / my.sum()

    # raw field at piece centres (or nodes), winner = first covering candidate
    cb = view.bounds[cand]
    covx = (cb[:, 0, None] <= nx[None, :]) & (nx[None, :] <= cb[:, 1, None])
    covy = (cb[:, 2, None] <= ny[None, :]) & (ny[None, :] <= cb[:, 3, None])
    cover = covx[:, :, None] & covy[:, None, :]
    anyc = cover.any(axis=0)
    first = cover.argmax(axis=0)
    sig = view.config.sigma[np.asarray(cand)][first]
    e1 = np.where(anyc, (sig == 1).astype(float), 0.5)
    v1 = float(mx @ e1 @ my)
    v1 = min(max(v1, 0.0), 1.0)
    return np.array([v1, 1.0 - v1])


class FieldEvaluator:
    """Callable ``x -> v(x)`` bound to a view, for the integrator."""

    def __init__(self, view: TessellationView | None, spec: MollifierSpec = MollifierSpec()):
        self.view = view
        self.spec = spec
        self._last = (None, None)  # the integrator re-evaluates step endpoints

    def __call__(self, x) -> np.ndarray:
        if self.view is None:
            return np.array([0.5, 0.5])
        key = (float(x[0]), float(x[1]))
        if self._last[0] == key:
            return self._last[1].copy()
        val = v_at(key, self.view, self.spec)
        self._last = (key, val)
        return val.copy()


class ConstantField:
    """Constant unit-sum field, for tests and the empty-field CLI flag."""

    def __init__(self, v1: float):
        self.v = np.array([v1, 1.0 - v1])

    def __call__(self, x) -> np.ndarray:
        return self.v.copy()

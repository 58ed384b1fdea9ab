"""Successor relation and the constructive chain of blocking channels.

Coordinates along a channel are written ``s`` (its own direction) and ``t``
(the perpendicular one).  A channel is entered at ``s = c`` and occupies the
cross band ``[top - 1, top]``.  The next level is the first stronger domain
meeting the band beyond the entry; it is a complete block when it is
perpendicular, starts at least two below ``top`` and reaches ``top``.  The
widened-block check then asks that no stronger point in the unexplored
half-plane meets the unit square after the blocker.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._validation import InvalidArgumentError, OutOfWindowError, check_point, check_positive_int
from .geometry import Rect
from .markov import r_norm
from .pointfield import MarkedPoint
from .tessellation import TessellationView

DEFAULT_N_MAX = 8
RECORD_VERSION = 1


def _rect(s_axis: int, s0, s1, t0, t1, open_s0=False, open_s1=False, open_t0=False, open_t1=False) -> Rect:
    """Rectangle given in channel coordinates."""
    if s_axis == 0:
        return Rect(s0, s1, t0, t1, open_s0, open_s1, open_t0, open_t1)
    return Rect(t0, t1, s0, s1, open_t0, open_t1, open_s0, open_s1)


def _coords(view: TessellationView, i: int, s_axis: int) -> tuple[float, float]:
    x = view.config.x[i]
    return float(x[s_axis]), float(x[1 - s_axis])


def _length(view: TessellationView, i: int) -> float:
    return float(view.config.r[i] * view.config.xi[i])


def is_successor_index(view: TessellationView, i: int, j: int, L: float) -> bool:
    """Index form of :func:`is_successor`."""
    sig = view.config.sigma
    xi = view.config.xi
    if sig[j] == sig[i] or not xi[i] < xi[j]:
        return False
    s = int(sig[i]) - 1
    si, ti = _coords(view, i, s)
    sj, _ = _coords(view, j, s)
    delta = _rect(s, L - 1.0, L, ti, ti + 1.0)
    if not view.region_constant_index(delta, i):
        return False
    if sj > L:
        gap = _rect(s, L, sj, ti, ti + 1.0, open_s0=True, open_s1=True)
        if not view.region_constant_index(gap, i):
            return False
    block = _rect(s, sj, sj + 1.0, ti - 1.0, ti + 1.0)
    return view.region_constant_index(block, j)


def is_successor(eta_i: MarkedPoint, eta_j: MarkedPoint, L: float, view: TessellationView) -> bool:
    """Whether the domain of ``eta_j`` is a successor of that of ``eta_i`` at level ``L``.

    All four conditions are evaluated exactly: the selector is constant on
    the level strip and on the open gap up to the successor, the strengths
    increase, the directions differ, and the successor owns the widened
    block around the channel.
    """
    return is_successor_index(view, view.index_of(eta_i), view.index_of(eta_j), float(L))


@dataclass
class ChainRecord:
    """Outcome of the chain construction started at ``y``."""

    y: tuple[float, float]
    indices: list[int] = field(default_factory=list)
    levels: list[dict] = field(default_factory=list)
    entries: list[float] = field(default_factory=list)
    tops: list[float] = field(default_factory=list)
    level_coords: list[float] = field(default_factory=list)
    U: list[float] = field(default_factory=list)
    V: list[float] = field(default_factory=list)
    U_tilde: dict[int, float] = field(default_factory=dict)
    V_tilde: dict[int, float] = field(default_factory=dict)
    L: list[float] = field(default_factory=list)
    R: list[float] = field(default_factory=list)
    e: list[float] = field(default_factory=list)
    b_flags: list[bool] = field(default_factory=list)
    a_flags: list[bool] = field(default_factory=list)
    successor_ok: list[bool] = field(default_factory=list)
    blocker: int | None = None
    terminal_level: int = -1
    truncated: bool = False

    @property
    def depth(self) -> int:
        return self.terminal_level + 1

    def to_dict(self) -> dict:
        d = asdict(self)
        d["y"] = list(self.y)
        d["U_tilde"] = {str(k): v for k, v in sorted(self.U_tilde.items())}
        d["V_tilde"] = {str(k): v for k, v in sorted(self.V_tilde.items())}
        d["version"] = RECORD_VERSION
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ChainRecord":
        d = dict(d)
        d.pop("version", None)
        d["y"] = tuple(d["y"])
        d["U_tilde"] = {int(k): v for k, v in d["U_tilde"].items()}
        d["V_tilde"] = {int(k): v for k, v in d["V_tilde"].items()}
        return cls(**d)


def detect_chain(y, view: TessellationView, n_max: int = DEFAULT_N_MAX) -> ChainRecord:
    """Run the level-by-level construction from ``y`` up to ``n_max`` levels.

    ``terminal_level`` is the last accepted level (``-1`` when level 0
    fails).  Running out of window sets ``truncated`` and stops.
    """
    y1, y2 = check_point(y, "y")
    n_max = check_positive_int(n_max, "n_max")
    cfg = view.config
    W = view.window
    rec = ChainRecord((y1, y2))

    # level 0
    q0 = Rect(y1 - 1.0, y1, y2 - 1.0, y2)
    if not q0.within(W) or not (W.y0 <= y2 + 1.0 <= W.y1):
        rec.truncated = True
        return rec
    k0 = view.phi_index(y1, y2)
    b0 = k0 >= 0 and cfg.sigma[k0] == 1 and not view.domains_meeting(q0, min_rank=view._rank[k0])
    rec.b_flags.append(bool(b0))
    if not b0:
        rec.a_flags.append(False)
        return rec
    top = float(cfg.x[k0, 1]) + 1.0
    g0 = Rect(y1 - 1.0, y1, y2, top, open_bottom=True)
    a0 = view.region_constant_index(g0, k0)
    rec.a_flags.append(bool(a0))
    if not a0:
        return rec
    xi0 = float(cfg.xi[k0])
    rec.indices.append(int(k0))
    rec.levels.append(cfg.point(k0).to_dict())
    rec.entries.append(y1)
    rec.tops.append(top)
    rec.level_coords.append(y1)
    rec.U.append(y1)
    rec.V.extend([y2, top])
    rec.L.append((float(cfg.x[k0, 0]) - y1) / xi0 + float(cfg.r[k0]))
    rec.R.append(0.0)
    rec.e.append(0.0)
    rec.terminal_level = 0

    for n in range(n_max):
        k = rec.indices[n]
        c, top = rec.entries[n], rec.tops[n]
        step = advance_level(view, k, c, top)
        if step.truncated and step.u_tilde is None:
            rec.truncated = True
            break
        s = step.axis
        (rec.U_tilde if s == 0 else rec.V_tilde)[n + 1] = step.u_tilde
        rec.b_flags.append(step.blocked)
        if not step.blocked:
            rec.a_flags.append(False)
            break
        p = step.blocker
        rec.blocker = p
        if step.truncated:
            rec.truncated = True
            rec.a_flags.append(False)
            break
        rec.a_flags.append(step.widened_ok)
        if not step.widened_ok:
            break
        u_t = step.u_tilde
        rec.R.append(u_t - c)
        rec.e.append((u_t - c) / float(r_norm(cfg.xi[k], cfg.alpha)))
        rec.indices.append(p)
        rec.levels.append(cfg.point(p).to_dict())
        rec.entries.append(top)
        rec.tops.append(u_t + 1.0)
        rec.level_coords.append(top - 1.0)
        (rec.U if s == 0 else rec.V).append(u_t + 1.0)
        t = 1 - s
        rec.L.append((float(cfg.x[p, t]) - top) / float(cfg.xi[p]) + float(cfg.r[p]))
        try:
            ok = is_successor_index(view, k, p, rec.level_coords[n])
        except OutOfWindowError:
            ok = False
        rec.successor_ok.append(bool(ok))
        rec.terminal_level = n + 1
    return rec


@dataclass
class LevelStep:
    """Result of searching the next level from a channel.

    ``u_tilde`` is the blocking coordinate (the channel end when nothing
    blocks), ``blocked`` the complete-block test, and ``widened_ok`` the
    check on the unit square after the blocker.  ``truncated`` flags that the
    window ended before the answer was known.
    """

    axis: int
    u_tilde: float | None
    blocker: int | None
    blocked: bool
    widened_ok: bool
    truncated: bool


def advance_level(view: TessellationView, k: int, c: float, top: float) -> LevelStep:
    """Search the band of channel ``k`` beyond entry ``c`` for the next level."""
    cfg = view.config
    W = view.window
    s = int(cfg.sigma[k]) - 1
    t = 1 - s
    end = float(cfg.x[k, s]) + _length(view, k)
    w_lo, w_hi = (W.x0, W.y0)[s], (W.x1, W.y1)[s]
    t_lo, t_hi = (W.x0, W.y0)[t], (W.x1, W.y1)[t]
    if not (t_lo <= top - 2.0 and top <= t_hi and w_lo <= c):
        return LevelStep(s, None, None, False, False, True)
    strip = _rect(s, c, min(end, w_hi), top - 1.0, top)
    cands = view.domains_meeting(strip, min_rank=view._rank[k], check=False)
    p = min(cands, key=lambda i: (float(cfg.x[i, s]), -view._rank[i])) if cands else None
    if p is None:
        if end > w_hi:
            return LevelStep(s, None, None, False, False, True)
        return LevelStep(s, end, None, False, False, False)
    u_t = min(end, max(c, float(cfg.x[p, s])))
    ps, pt = _coords(view, p, s)
    blocked = (
        u_t < end
        and int(cfg.sigma[p]) - 1 == t
        and ps > c
        and pt <= top - 2.0
        and pt + _length(view, p) >= top
    )
    if not blocked:
        return LevelStep(s, u_t, int(p), False, False, False)
    widened = _rect(s, u_t, u_t + 1.0, top - 2.0, top, open_s0=True)
    if not widened.within(W):
        return LevelStep(s, u_t, int(p), True, False, True)
    ok = True
    for i in view.domains_meeting(widened, min_rank=view._rank[p], check=False):
        is_, it_ = _coords(view, i, s)
        if is_ > u_t or it_ > top:
            ok = False
            break
    return LevelStep(s, u_t, int(p), True, ok, False)


def residual_length(chain: ChainRecord, n: int) -> float:
    """Rescaled remaining length of the level-``n`` channel beyond its entry."""
    if not (0 <= n <= chain.terminal_level):
        raise InvalidArgumentError(f"level {n} was not accepted")
    return chain.L[n]


@dataclass
class BlockingTimes:
    """First footprint distances of the four blocking classes past the entry.

    ``tau[j]`` is ``inf`` when no class-``j`` point lies within ``censor``.
    """

    level: int
    zeta: float
    tau: list[float]
    censor: float
    xi_L: float
    partial: bool = False

    @property
    def observed(self) -> list[bool]:
        return [math.isfinite(v) for v in self.tau]

    def next_is_complete(self) -> bool | None:
        """``tau_0 < min(xi L, tau_1, tau_2, tau_3)``; None when undecidable in the window."""
        first = min([self.xi_L] + self.tau)
        if not math.isfinite(first) or first > self.censor:
            return None
        return self.tau[0] == first and self.tau[0] < min([self.xi_L] + self.tau[1:])

    def to_dict(self) -> dict:
        return asdict(self)


def blocking_times(chain: ChainRecord, n: int, view: TessellationView) -> BlockingTimes:
    if not (0 <= n <= chain.terminal_level):
        raise InvalidArgumentError(f"level {n} was not accepted")
    cfg = view.config
    W = view.window
    k = chain.indices[n]
    s = int(cfg.sigma[k]) - 1
    t = 1 - s
    c, top = chain.entries[n], chain.tops[n]
    zeta = float(cfg.xi[k])
    w_hi = (W.x1, W.y1)[s]
    t_lo, t_hi = (W.x0, W.y0)[t], (W.x1, W.y1)[t]
    partial = not (t_lo <= top - 2.0 and top <= t_hi)
    censor = w_hi - c
    xs = cfg.x[:, s] - c
    b = cfg.x[:, t] - top
    length = cfg.r * cfg.xi
    perp = cfg.sigma == t + 1
    live = (cfg.xi > zeta) & (xs > 0) & (xs <= censor)
    classes = [
        live & perp & (b <= -2.0) & (b + length >= 0.0),
        live & perp & (b <= -2.0) & (b + length > -1.0) & (b + length < 0.0),
        live & perp & (b > -2.0) & (b < 0.0) & (b + length >= -1.0),
        live & ~perp & (b >= -2.0) & (b <= 0.0),
    ]
    tau = [float(xs[m].min()) if m.any() else math.inf for m in classes]
    xi_L = float(cfg.x[k, s]) + float(length[k]) - c
    return BlockingTimes(n, zeta, tau, censor, xi_L, partial)


def reflect_view(view: TessellationView) -> TessellationView:
    """Swap the two coordinates and directions, so chains may start vertically."""
    from .pointfield import Configuration

    cfg = view.config
    W = cfg.window
    refl = Configuration(
        cfg.x[:, ::-1],
        cfg.r,
        cfg.xi,
        3 - cfg.sigma,
        Rect(W.y0, W.y1, W.x0, W.x1),
        alpha=cfg.alpha,
        truncation_epsilon=cfg.truncation_epsilon,
        seed=cfg.seed,
        pad=cfg.pad,
    )
    return TessellationView(refl)

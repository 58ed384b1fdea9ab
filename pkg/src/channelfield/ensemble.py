"""Monte Carlo ensembles of chain starts, shared by statistical checks.

Each replica samples a fresh configuration around the start ``y = (0, 0)``,
runs the level-0 and level-1 construction and records the quantities the
distributional checks need.  Replicas use independent Philox streams
spawned from one seed.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from ._rng import child_seeds, rng_from_seq
from .chains import blocking_times, detect_chain
from .geometry import Rect
from .pointfield import IntensityParams, sample_configuration
from .tessellation import TessellationView

# footprint boxes relative to the level-1 stopping point (blocking abscissa, band top)
POST_BOX = (0.0, 2.0, -2.0, 0.0)  # (0, 2] x (-2, 0], inside the unexplored half-plane
PRE_BOX = (-2.0, 0.0, -2.0, 0.0)  # [-2, 0) x [-2, 0), explored before stopping


def n_threads() -> int:
    """Worker cap from ``CHANNELFIELD_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("CHANNELFIELD_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class Level0Data:
    """Per-replica arrays; entries are NaN where an event did not occur."""

    alpha: float
    reach: float
    b0: np.ndarray
    a0: np.ndarray
    zeta: np.ndarray
    L0: np.ndarray
    tau: np.ndarray  # (n, 4), inf when censored
    censor: np.ndarray
    xi_L: np.ndarray
    b1: np.ndarray
    a1: np.ndarray
    ratio: np.ndarray  # blocker strength / channel strength on B1
    e1: np.ndarray
    post_count: np.ndarray  # -1 when the box is not observable
    pre_count: np.ndarray
    complete_from_tau: np.ndarray  # -1 undecidable, else 0/1
    post_box: tuple = POST_BOX
    pre_box: tuple = PRE_BOX

    @property
    def n(self) -> int:
        return len(self.b0)


def _count(cfg, box) -> int:
    x0, x1, y0, y1 = box
    return int(np.count_nonzero((cfg.x[:, 0] > x0) & (cfg.x[:, 0] <= x1) & (cfg.x[:, 1] > y0) & (cfg.x[:, 1] <= y1)))


def _count_pre(cfg, box) -> int:
    x0, x1, y0, y1 = box
    return int(np.count_nonzero((cfg.x[:, 0] >= x0) & (cfg.x[:, 0] < x1) & (cfg.x[:, 1] >= y0) & (cfg.x[:, 1] < y1)))


def _one(seq, alpha: float, reach: float, epsilon: float, post_box=POST_BOX, pre_box=PRE_BOX) -> tuple:
    rng = rng_from_seq(seq)
    window = Rect(-1.0, reach + 1.0, -2.0, 1.0)
    cfg = sample_configuration(window, epsilon, IntensityParams(alpha), seed=int(seq.entropy) % (2**63), rng=rng)
    view = TessellationView(cfg)
    rec = detect_chain((0.0, 0.0), view, n_max=1)
    nan = math.nan
    b0 = rec.b_flags[0] if rec.b_flags else False
    out = dict(b0=b0, a0=False, zeta=nan, L0=nan, tau=[nan] * 4, censor=nan, xi_L=nan, b1=False, a1=False,
               ratio=nan, e1=nan, post=-1, pre=-1, complete=-1)
    if b0:
        k0 = view.phi_index(0.0, 0.0)
        out["zeta"] = float(cfg.xi[k0])
        out["L0"] = float(cfg.x[k0, 0]) / float(cfg.xi[k0]) + float(cfg.r[k0])  # y1 = 0
    if rec.terminal_level >= 0:
        out["a0"] = True
        bt = blocking_times(rec, 0, view)
        out["tau"] = bt.tau
        out["censor"] = bt.censor
        out["xi_L"] = bt.xi_L
        nc = bt.next_is_complete()
        out["complete"] = -1 if nc is None else int(nc)
        if len(rec.b_flags) > 1:
            out["b1"] = rec.b_flags[1]
            out["a1"] = rec.a_flags[1] and not rec.truncated
        if out["b1"]:
            p = rec.blocker
            out["ratio"] = float(cfg.xi[p]) / out["zeta"]
            u_t = rec.U_tilde[1]
            top = rec.tops[0]
            post = (u_t + post_box[0], u_t + post_box[1], top + post_box[2], top + post_box[3])
            pre = (u_t + pre_box[0], u_t + pre_box[1], top + pre_box[2], top + pre_box[3])
            W = cfg.window
            if post[1] <= W.x1 and min(post[2], pre[2]) >= W.y0 and pre[0] >= W.x0 and max(post[3], pre[3]) <= W.y1:
                out["post"] = _count(cfg, post)
                out["pre"] = _count_pre(cfg, pre)
        if out["a1"]:
            out["e1"] = rec.e[1]
    return (out["b0"], out["a0"], out["zeta"], out["L0"], out["tau"], out["censor"], out["xi_L"], out["b1"],
            out["a1"], out["ratio"], out["e1"], out["post"], out["pre"], out["complete"])


def level0_ensemble(
    n: int,
    seed: int = 0,
    alpha: float = 1.5,
    reach: float = 20.0,
    epsilon: float = 1e-6,
    post_box: tuple = POST_BOX,
    pre_box: tuple = PRE_BOX,
) -> Level0Data:
    """Run ``n`` independent replicas of the level-0/level-1 construction.

    Parameters
    ----------
    reach : float
        Window length beyond the start along the first channel; blocking
        times beyond it are right-censored.
    """
    seqs = child_seeds(seed, n)
    workers = n_threads()
    if workers > 1:
        from joblib import Parallel, delayed

        rows = Parallel(n_jobs=workers, batch_size=256)(
            delayed(_one)(s, alpha, reach, epsilon, post_box, pre_box) for s in seqs
        )
    else:
        rows = [_one(s, alpha, reach, epsilon, post_box, pre_box) for s in seqs]
    cols = list(zip(*rows)) if rows else [[]] * 14
    return Level0Data(
        alpha=alpha,
        reach=reach,
        b0=np.array(cols[0], dtype=bool),
        a0=np.array(cols[1], dtype=bool),
        zeta=np.array(cols[2], dtype=float),
        L0=np.array(cols[3], dtype=float),
        tau=np.array(cols[4], dtype=float).reshape(-1, 4),
        censor=np.array(cols[5], dtype=float),
        xi_L=np.array(cols[6], dtype=float),
        b1=np.array(cols[7], dtype=bool),
        a1=np.array(cols[8], dtype=bool),
        ratio=np.array(cols[9], dtype=float),
        e1=np.array(cols[10], dtype=float),
        post_count=np.array(cols[11], dtype=int),
        pre_count=np.array(cols[12], dtype=int),
        complete_from_tau=np.array(cols[13], dtype=int),
        post_box=tuple(post_box),
        pre_box=tuple(pre_box),
    )


@dataclass
class PlantedData:
    """Blocking outcomes for a planted horizontal channel of fixed strength."""

    alpha: float
    zeta: float
    reach: float
    tau: np.ndarray
    censor: np.ndarray
    xi_L: np.ndarray
    b1: np.ndarray
    a1: np.ndarray
    decided: np.ndarray
    ratio: np.ndarray
    e1: np.ndarray


def _planted_one(seq, zeta: float, alpha: float, reach: float, epsilon: float) -> tuple:
    from .chains import advance_level, ChainRecord
    from .markov import r_norm
    from .pointfield import Configuration

    rng = rng_from_seq(seq)
    window = Rect(-1.0, reach + 1.0, -3.0, 1.0)
    cfg = sample_configuration(window, epsilon, IntensityParams(alpha), seed=0, rng=rng)
    # entry c = 0 and band [-1, 0]; stronger points rooted in the explored
    # quadrant {x1 <= 0, x2 <= 0} are removed, the rest of the field is untouched
    keep = ~((cfg.x[:, 0] <= 0.0) & (cfg.x[:, 1] <= 0.0) & (cfg.xi > zeta))
    L = rng.exponential()
    r = 1.0 / zeta + L  # footprint one unit before the entry
    x = np.vstack([cfg.x[keep], [[-1.0, -1.0]]])
    planted = Configuration(
        x, np.r_[cfg.r[keep], r], np.r_[cfg.xi[keep], zeta], np.r_[cfg.sigma[keep], 1], window, alpha=alpha
    )
    view = TessellationView(planted)
    k = len(planted) - 1
    step = advance_level(view, k, 0.0, 0.0)
    rec = ChainRecord((0.0, 0.0), indices=[k], entries=[0.0], tops=[0.0], terminal_level=0)
    bt = blocking_times(rec, 0, view)
    decided = step.u_tilde is not None
    b1 = bool(step.blocked)
    a1 = b1 and step.widened_ok and not step.truncated
    ratio = float(planted.xi[step.blocker]) / zeta if b1 else math.nan
    e1 = step.u_tilde / float(r_norm(zeta, alpha)) if b1 else math.nan
    return bt.tau, bt.censor, bt.xi_L, b1, a1, decided and not (b1 and step.truncated), ratio, e1


def planted_ensemble(n: int, zeta: float, seed: int = 0, alpha: float = 1.5, reach: float = 20.0, epsilon: float = 1e-6) -> PlantedData:
    """Blocking statistics for ``n`` replicas of a planted channel of strength ``zeta``."""
    seqs = child_seeds(seed, n)
    rows = [_planted_one(s, zeta, alpha, reach, epsilon) for s in seqs]
    cols = list(zip(*rows))
    return PlantedData(
        alpha=alpha,
        zeta=zeta,
        reach=reach,
        tau=np.array(cols[0], dtype=float).reshape(-1, 4),
        censor=np.array(cols[1], dtype=float),
        xi_L=np.array(cols[2], dtype=float),
        b1=np.array(cols[3], dtype=bool),
        a1=np.array(cols[4], dtype=bool),
        decided=np.array(cols[5], dtype=bool),
        ratio=np.array(cols[6], dtype=float),
        e1=np.array(cols[7], dtype=float),
    )

"""Domain map, max-strength selector and exact region queries.

Domains are closed rectangles.  A uniform grid with unit buckets over the
validity window indexes them; long domains are clipped to the window before
bucketing.  Within a bucket, domains are kept in decreasing selector order so
the first covering domain is the winner.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._validation import OutOfWindowError, check_point, check_points
from .geometry import Rect
from .pointfield import Configuration, MarkedPoint


class _Theta:
    """The empty selection: no domain covers the point."""

    xi = 0.0
    sigma = None

    def __repr__(self) -> str:
        return "Theta"

    def __reduce__(self):
        return "THETA"


THETA = _Theta()


@dataclass(frozen=True)
class InfluenceDomain:
    base: MarkedPoint
    rect: Rect


def domain_of(eta: MarkedPoint) -> InfluenceDomain:
    """Rectangle of length ``r * xi`` and width one along ``e_sigma``."""
    x1, x2 = eta.x
    length = eta.r * eta.xi
    if eta.sigma == 1:
        rect = Rect(x1, x1 + length, x2, x2 + 1.0)
    else:
        rect = Rect(x1, x1 + 1.0, x2, x2 + length)
    return InfluenceDomain(eta, rect)


def selector_rank(config: Configuration) -> np.ndarray:
    """Rank of each point in the total order ``(xi, x1, x2, sigma)``."""
    order = np.lexsort((config.sigma, config.x[:, 1], config.x[:, 0], config.xi))
    rank = np.empty(len(config), dtype=np.int64)
    rank[order] = np.arange(len(config))
    return rank


class TessellationView:
    """Read-only query structure over a configuration.

    Parameters
    ----------
    config : Configuration
        Points to index.  Queries are valid inside ``config.window``.
    """

    def __init__(self, config: Configuration):
        self.config = config
        self.window = config.window
        self.bounds = config.domain_bounds()
        self.rank = selector_rank(config)
        b = self.bounds
        self._x0 = b[:, 0].tolist()
        self._x1 = b[:, 1].tolist()
        self._y0 = b[:, 2].tolist()
        self._y1 = b[:, 3].tolist()
        self._xi = config.xi.tolist()
        self._sigma = config.sigma.tolist()
        self._rank = self.rank.tolist()
        self._build_index()

    # index -------------------------------------------------------------
    def _build_index(self):
        W = self.window
        self.nx = max(1, int(math.ceil(W.width)) + 1)
        self.ny = max(1, int(math.ceil(W.height)) + 1)
        b = self.bounds
        n = len(b)
        self._cells: dict[int, list[int]] = {}
        if n == 0:
            return
        meets = (b[:, 1] >= W.x0) & (b[:, 0] <= W.x1) & (b[:, 3] >= W.y0) & (b[:, 2] <= W.y1)
        ids = np.nonzero(meets)[0]
        if len(ids) == 0:
            return
        cx0 = self._cx(np.maximum(b[ids, 0], W.x0))
        cx1 = self._cx(np.minimum(b[ids, 1], W.x1))
        cy0 = self._cy(np.maximum(b[ids, 2], W.y0))
        cy1 = self._cy(np.minimum(b[ids, 3], W.y1))
        ncol = cx1 - cx0 + 1
        counts = ncol * (cy1 - cy0 + 1)
        owner = np.repeat(np.arange(len(ids)), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        k = np.arange(counts.sum()) - starts
        col = cx0[owner] + k % ncol[owner]
        row = cy0[owner] + k // ncol[owner]
        cell = row * self.nx + col
        dom = ids[owner]
        order = np.lexsort((-self.rank[dom], cell))
        cell, dom = cell[order], dom[order]
        cuts = np.nonzero(np.diff(cell))[0] + 1
        for c, group in zip(cell[np.r_[0, cuts]].tolist(), np.split(dom, cuts)):
            self._cells[c] = group.tolist()

    def _cx(self, x):
        return np.clip(np.floor(np.asarray(x) - self.window.x0).astype(np.int64), 0, self.nx - 1)

    def _cy(self, y):
        return np.clip(np.floor(np.asarray(y) - self.window.y0).astype(np.int64), 0, self.ny - 1)

    def _cell_of(self, x: float, y: float) -> int:
        cx = min(max(int(math.floor(x - self.window.x0)), 0), self.nx - 1)
        cy = min(max(int(math.floor(y - self.window.y0)), 0), self.ny - 1)
        return cy * self.nx + cx

    def _check_point(self, x: float, y: float):
        W = self.window
        if not (W.x0 <= x <= W.x1 and W.y0 <= y <= W.y1):
            raise OutOfWindowError(f"point ({x}, {y}) outside validity window {W.bounds}")

    def _check_rect(self, R: Rect):
        if not R.is_empty() and not R.within(self.window):
            raise OutOfWindowError(f"region {R.bounds} outside validity window {self.window.bounds}")

    def covers(self, i: int, x: float, y: float) -> bool:
        return self._x0[i] <= x <= self._x1[i] and self._y0[i] <= y <= self._y1[i]

    # selector ------------------------------------------------------------
    def phi_index(self, x, y=None) -> int:
        """Index of the winning point at ``x``, or -1 for Theta."""
        if y is None:
            x, y = check_point(x)
        self._check_point(x, y)
        for i in self._cells.get(self._cell_of(x, y), ()):
            if self._x0[i] <= x <= self._x1[i] and self._y0[i] <= y <= self._y1[i]:
                return i
        return -1

    def phi_at(self, x) -> MarkedPoint | _Theta:
        i = self.phi_index(*check_point(x))
        return THETA if i < 0 else self.config.point(i)

    def phi_many(self, X) -> np.ndarray:
        """Vectorized selector over an ``(n, 2)`` array of query points."""
        X = check_points(X)
        W = self.window
        if np.any((X[:, 0] < W.x0) | (X[:, 0] > W.x1) | (X[:, 1] < W.y0) | (X[:, 1] > W.y1)):
            raise OutOfWindowError("query points outside validity window")
        out = np.full(len(X), -1, dtype=np.int64)
        cells = self._cy(X[:, 1]) * self.nx + self._cx(X[:, 0])
        order = np.argsort(cells, kind="stable")
        sc = cells[order]
        cuts = np.nonzero(np.diff(sc))[0] + 1
        b = self.bounds
        for c, q in zip(sc[np.r_[0, cuts]].tolist(), np.split(order, cuts)):
            cand = self._cells.get(c)
            if not cand:
                continue
            cb = b[cand]
            px, py = X[q, 0], X[q, 1]
            hit = (
                (cb[:, 0, None] <= px) & (px <= cb[:, 1, None]) & (cb[:, 2, None] <= py) & (py <= cb[:, 3, None])
            )
            anyhit = hit.any(axis=0)
            first = hit.argmax(axis=0)
            out[q[anyhit]] = np.asarray(cand)[first[anyhit]]
        return out

    def phi_scan(self, x) -> int:
        """Linear-scan selector, the reference for :meth:`phi_index`."""
        x, y = check_point(x)
        self._check_point(x, y)
        best = -1
        for i in range(len(self._xi)):
            if self.covers(i, x, y) and (best < 0 or self._rank[i] > self._rank[best]):
                best = i
        return best

    def v_tilde_at(self, x) -> np.ndarray:
        i = self.phi_index(*check_point(x))
        return self.v_tilde_index(i)

    def v_tilde_index(self, i: int) -> np.ndarray:
        if i < 0:
            return np.array([0.5, 0.5])
        return np.array([1.0, 0.0]) if self._sigma[i] == 1 else np.array([0.0, 1.0])

    # region queries -------------------------------------------------------
    def domains_meeting(self, R: Rect, min_rank: int | None = None, check: bool = True) -> list[int]:
        """Indices of domains meeting ``R`` (respecting open sides).

        Only domains ranked above ``min_rank`` are returned when it is given.
        Results are sorted by decreasing selector rank.
        """
        if check:
            self._check_rect(R)
        if R.is_empty() or not self._cells:
            return []
        W = self.window
        x0, x1 = max(R.x0, W.x0), min(R.x1, W.x1)
        y0, y1 = max(R.y0, W.y0), min(R.y1, W.y1)
        if x0 > x1 or y0 > y1:
            return []
        cx0, cx1 = int(self._cx(x0)), int(self._cx(x1))
        cy0, cy1 = int(self._cy(y0)), int(self._cy(y1))
        seen = set()
        out = []
        for cy in range(cy0, cy1 + 1):
            base = cy * self.nx
            for cx in range(cx0, cx1 + 1):
                for i in self._cells.get(base + cx, ()):
                    if min_rank is not None and self._rank[i] <= min_rank:
                        break  # buckets are sorted by rank
                    if i in seen:
                        continue
                    seen.add(i)
                    if R.meets_closed(self._x0[i], self._x1[i], self._y0[i], self._y1[i]):
                        out.append(i)
        out.sort(key=lambda i: -self._rank[i])
        return out

    def domains_meeting_scan(self, R: Rect, min_rank: int | None = None) -> list[int]:
        self._check_rect(R)
        out = [
            i
            for i in range(len(self._xi))
            if (min_rank is None or self._rank[i] > min_rank)
            and R.meets_closed(self._x0[i], self._x1[i], self._y0[i], self._y1[i])
        ]
        out.sort(key=lambda i: -self._rank[i])
        return out

    def region_constant_index(self, R: Rect, i: int, scan: bool = False) -> bool:
        """Whether the selector equals point ``i`` on all of ``R``."""
        self._check_rect(R)
        if R.is_empty():
            return True
        if not R.inside_closed(self._x0[i], self._x1[i], self._y0[i], self._y1[i]):
            return False
        finder = self.domains_meeting_scan if scan else self.domains_meeting
        return not finder(R, min_rank=self._rank[i])

    def region_constant(self, R: Rect, eta: MarkedPoint, scan: bool = False) -> bool:
        return self.region_constant_index(R, self.index_of(eta), scan=scan)

    def index_of(self, eta: MarkedPoint) -> int:
        hits = np.nonzero(
            (self.config.xi == eta.xi) & (self.config.x[:, 0] == eta.x[0]) & (self.config.x[:, 1] == eta.x[1])
        )[0]
        if len(hits) == 0:
            raise KeyError(f"{eta!r} is not in the configuration")
        return int(hits[0])

    # debug -----------------------------------------------------------------
    def dump_json(self) -> str:
        """Cell structure for visualization tools."""
        doms = [
            {
                "index": i,
                "rect": [self._x0[i], self._y0[i], self._x1[i], self._y1[i]],
                "xi": self._xi[i],
                "sigma": self._sigma[i],
                "rank": self._rank[i],
            }
            for i in range(len(self._xi))
        ]
        buckets = {str(c): v for c, v in sorted(self._cells.items())}
        return json.dumps(
            {"window": list(self.window.bounds), "grid": [self.nx, self.ny], "domains": doms, "buckets": buckets}
        )

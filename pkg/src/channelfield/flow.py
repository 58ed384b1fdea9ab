"""Integral curves of the smoothed field and direction statistics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._validation import OutOfWindowError, check_point, check_positive


@dataclass
class Curve:
    """Sampled trajectory ``gamma_z`` at equally spaced times."""

    start: tuple[float, float]
    times: np.ndarray
    positions: np.ndarray
    step: float
    truncated: bool = False

    def conservation_error(self) -> float:
        """Max deviation of ``gamma1 + gamma2 - t`` from its initial value."""
        s = self.positions.sum(axis=1) - self.times
        return float(np.abs(s - (self.start[0] + self.start[1] - self.times[0])).max())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "x1", "x2"])
        for t, (a, b) in zip(self.times, self.positions):
            w.writerow([format(t, ".17g"), format(a, ".17g"), format(b, ".17g")])
        return buf.getvalue()

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_csv())
        return path

    @classmethod
    def read_csv(cls, path, step: float, truncated: bool = False) -> "Curve":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls((data[0, 1], data[0, 2]), data[:, 0].copy(), data[:, 1:3].copy(), step, truncated)


def _rk4_step(f, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_curve(z, t_end: float, step: float, field, t_start: float = 0.0) -> Curve:
    """Classical fixed-step RK4 for ``gamma' = v(gamma)``, ``gamma(t_start) = z``.

    Leaving the validity window stops the integration and sets ``truncated``.
    """
    z = check_point(z, "z")
    t_end = check_positive(t_end, "t_end")
    step = check_positive(step, "step")
    n = int(round((t_end - t_start) / step))
    if n < 0:
        raise ValueError("t_end precedes the start time")
    # index times by absolute step count so resumed runs reproduce them bitwise
    k0 = int(round(t_start / step))
    on_grid = math.isclose(k0 * step, t_start, rel_tol=0.0, abs_tol=1e-9 * step)
    times = [t_start]
    pos = [np.array(z, dtype=float)]
    y = pos[0]
    truncated = False
    for k in range(1, n + 1):
        try:
            y = _rk4_step(field, y, step)
            # the next step starts by evaluating here, so check it now
            field(y)
        except OutOfWindowError:
            truncated = True
            break
        times.append((k0 + k) * step if on_grid else t_start + k * step)
        pos.append(y)
    return Curve((float(z[0]), float(z[1])), np.array(times), np.array(pos), step, truncated)


def resume_curve(curve: Curve, t_end: float, field) -> Curve:
    """Continue ``curve`` from its last sample up to ``t_end``."""
    tail = integrate_curve(curve.positions[-1], t_end, curve.step, field, t_start=float(curve.times[-1]))
    return Curve(
        curve.start,
        np.concatenate([curve.times, tail.times[1:]]),
        np.vstack([curve.positions, tail.positions[1:]]),
        curve.step,
        tail.truncated,
    )


@dataclass
class RatioStats:
    """Running extremes of ``(gamma2 - o2) / (gamma1 - o1)`` at checkpoints."""

    checkpoints: list[float]
    ratios: list[float]
    running_min: list[float]
    running_max: list[float]
    skipped: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "checkpoints": self.checkpoints,
            "ratios": self.ratios,
            "running_min": self.running_min,
            "running_max": self.running_max,
            "skipped": self.skipped,
        }


def dyadic_checkpoints(t_max: float) -> list[float]:
    out, t = [], 1.0
    while t <= t_max + 1e-12:
        out.append(t)
        t *= 2.0
    return out


def ratio_stats(curve: Curve, origin=(0.0, 0.0), checkpoints=None) -> RatioStats:
    """Direction ratio relative to ``origin`` at the given (default dyadic) times."""
    o1, o2 = check_point(origin, "origin")
    if checkpoints is None:
        checkpoints = dyadic_checkpoints(float(curve.times[-1]))
    cps, ratios, mins, maxs, skipped = [], [], [], [], []
    lo, hi = math.inf, -math.inf
    for t in checkpoints:
        if t < curve.times[0] or t > curve.times[-1]:
            continue
        p1 = float(np.interp(t, curve.times, curve.positions[:, 0]))
        p2 = float(np.interp(t, curve.times, curve.positions[:, 1]))
        den = p1 - o1
        if den <= 0:
            skipped.append(float(t))
            continue
        q = (p2 - o2) / den
        lo, hi = min(lo, q), max(hi, q)
        cps.append(float(t))
        ratios.append(q)
        mins.append(lo)
        maxs.append(hi)
    return RatioStats(cps, ratios, mins, maxs, skipped)


def crossing_time(curve: Curve, axis: int, level: float) -> float | None:
    """First time coordinate ``axis`` (0 or 1) reaches ``level``, by linear interpolation."""
    c = curve.positions[:, axis]
    idx = np.nonzero(c >= level)[0]
    if len(idx) == 0:
        return None
    k = int(idx[0])
    if k == 0:
        return float(curve.times[0])
    c0, c1 = c[k - 1], c[k]
    frac = 0.0 if c1 == c0 else (level - c0) / (c1 - c0)
    return float(curve.times[k - 1] + frac * (curve.times[k] - curve.times[k - 1]))


def position_at(curve: Curve, t: float) -> np.ndarray:
    return np.array([np.interp(t, curve.times, curve.positions[:, i]) for i in (0, 1)])


def step_halving_ratio(z, t_end: float, step: float, field) -> float:
    """Ratio of successive sup-norm differences at steps ``h``, ``h/2``, ``h/4``.

    Differences are taken on the coarse time grid; a fourth-order method
    gives about 16.
    """
    curves = []
    for m in (1, 2, 4):
        c = integrate_curve(z, t_end, step / m, field)
        if c.truncated:
            raise OutOfWindowError("curve left the window during the order check")
        curves.append(c.positions[::m])
    d1 = float(np.abs(curves[0] - curves[1]).max())
    d2 = float(np.abs(curves[1] - curves[2]).max())
    return d1 / d2 if d2 > 0 else math.inf

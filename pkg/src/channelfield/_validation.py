"""Small argument-checking helpers shared across modules."""

from __future__ import annotations

import math
from numbers import Real

import numpy as np


class InvalidArgumentError(ValueError):
    """Raised when an argument lies outside its documented domain."""


class OutOfWindowError(ValueError):
    """Raised when a query leaves the window on which the sample is valid."""


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (1.0 < alpha < 2.0):
        raise InvalidArgumentError(f"alpha must lie in (1, 2), got {alpha!r}")
    return alpha


def check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not (0.0 < epsilon < 1.0):
        raise InvalidArgumentError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return epsilon


def check_zeta(zeta, name: str = "zeta"):
    """Accept a scalar or array of strengths >= 1."""
    arr = np.asarray(zeta, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 1.0):
        raise InvalidArgumentError(f"{name} must be finite and >= 1")
    return float(arr) if arr.ndim == 0 else arr


def check_positive(value: float, name: str) -> float:
    if not isinstance(value, Real) or not math.isfinite(value) or value <= 0:
        raise InvalidArgumentError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or int(value) != value or int(value) < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_point(x, name: str = "x") -> tuple[float, float]:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be a finite 2-vector, got {x!r}")
    return float(arr[0]), float(arr[1])


def check_points(X, name: str = "X") -> np.ndarray:
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1 and arr.shape == (2,):
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidArgumentError(f"{name} must have shape (n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return arr


class InsufficientSampleError(ValueError):
    """Raised when an ensemble is too small for the requested statistic."""

"""Input validation helpers used by the estimators and the functional core."""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigurationError, NumericError


def check_feature_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array, optionally of length ``dim``."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ConfigurationError(f"feature vector must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError("feature vector contains non-finite values")
    if dim is not None and arr.shape[0] != dim:
        raise ConfigurationError(
            f"feature vector has length {arr.shape[0]}, expected {dim}"
        )
    return arr


def check_scores(scores, arm_count: int | None = None) -> np.ndarray:
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ConfigurationError("scores must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        # bad values here mean the producing model diverged, not a bad call
        raise NumericError("scores contain non-finite values")
    if arm_count is not None and arr.shape[0] != arm_count:
        raise ConfigurationError(f"expected {arm_count} scores, got {arr.shape[0]}")
    return arr


def check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
    return value


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0 or not np.isfinite(value):
        raise ConfigurationError(f"{name} must be a positive finite number, got {value}")
    return value


def check_non_negative(value: float, name: str) -> float:
    value = float(value)
    if value < 0 or not np.isfinite(value):
        raise ConfigurationError(f"{name} must be non-negative and finite, got {value}")
    return value


def check_seed(seed: int, name: str = "seed") -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ConfigurationError(f"{name} must be an integer, got {seed!r}")
    if not 0 <= int(seed) < 2**64:
        raise ConfigurationError(f"{name} must fit in an unsigned 64-bit integer")
    return int(seed)


def check_rng(rng) -> np.random.Generator:
    """Accept a Generator or a seed and return a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(check_seed(rng))

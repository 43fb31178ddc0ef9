"""Small input-validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np

from .errors import DomainError, LengthMismatchError


def check_points(X, d: int = None, name: str = "X") -> np.ndarray:
    """Coerce to a finite (n, d) float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DomainError(f"{name} must be a nonempty 2-d array, got shape {X.shape}")
    if d is not None and X.shape[1] != d:
        raise DomainError(f"{name} has {X.shape[1]} columns, expected {d}")
    if not np.all(np.isfinite(X)):
        raise DomainError(f"{name} contains non-finite entries")
    return X


def check_vector(y, n: int, name: str = "y") -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if y.shape != (n,):
        raise LengthMismatchError(f"{name} must have length {n}, got {y.shape}")
    if not np.all(np.isfinite(y)):
        raise DomainError(f"{name} contains non-finite entries")
    return y


def check_mask(mask, n: int, name: str = "boundary") -> np.ndarray:
    mask = np.asarray(mask)
    if mask.dtype != bool or mask.shape != (n,):
        raise DomainError(f"{name} must be a boolean mask of length {n}")
    return mask

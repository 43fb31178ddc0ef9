"""Built-in 2-d test functions for the interpolation and collocation runs."""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def _split(X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return X[:, 0], X[:, 1]


def sin8(X):
    """(sin(8(x+y)) + cos(8(x-y)) + 4) / 35."""
    x, y = _split(X)
    return (np.sin(8 * (x + y)) + np.cos(8 * (x - y)) + 4.0) / 35.0


def sin8_laplacian(X):
    """Classical Laplacian of sin8: -128/35 (sin(8(x+y)) + cos(8(x-y)))."""
    x, y = _split(X)
    return -128.0 / 35.0 * (np.sin(8 * (x + y)) + np.cos(8 * (x - y)))


def rational_cos(X):
    """(cos(5.4y) + 1.25) / (6(3x-1)^2 + 6)."""
    x, y = _split(X)
    return (np.cos(5.4 * y) + 1.25) / (6.0 * (3.0 * x - 1.0) ** 2 + 6.0)


def rational_cos_source(X):
    """Classical Laplacian of rational_cos, written out term by term."""
    x, y = _split(X)
    h = 6.0 * (3.0 * x - 1.0) ** 2 + 6.0
    dh = 108.0 * x - 36.0
    cos = np.cos(5.4 * y)
    return (
        2.0 * dh**2 * (cos + 1.25) / h**3
        - (108.0 * cos + 135.0) / h**2
        - 29.16 * cos / h
    )


INTERPOLATION_TARGETS = {"sin8-interp": sin8}

# (f, g) pairs: interior source and boundary data.
COLLOCATION_PAIRS = {
    "rational-cos": (rational_cos_source, rational_cos),
    "sin8-colloc": (sin8_laplacian, sin8),
}


def interpolation_target(name: str):
    try:
        return INTERPOLATION_TARGETS[name]
    except KeyError:
        raise DomainError(
            f"unknown target {name!r}; choose from {sorted(INTERPOLATION_TARGETS)}"
        ) from None


def collocation_pair(name: str):
    try:
        return COLLOCATION_PAIRS[name]
    except KeyError:
        raise DomainError(
            f"unknown problem {name!r}; choose from {sorted(COLLOCATION_PAIRS)}"
        ) from None

"""QR shift preconditioning for ill-conditioned interpolation systems.

The system G L = U is replaced by the equivalent (HR)^-1 G L = (HR)^-1 U,
where G = QR and H is Q with a constant 1/2**n added to every entry.  The
shift exponent n is raised until the transformed matrix has condition
number below a target M; as n grows H approaches Q and the transformed
matrix approaches the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DomainError, NoShiftFoundError, SingularError


@dataclass(frozen=True)
class PrecondConfig:
    """Target condition bound M and the largest shift exponent to try."""

    M: float = 10.0
    n_max: int = 64

    def __post_init__(self):
        if not self.M > 1:
            raise DomainError(f"target condition bound must exceed 1, got {self.M}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")


@dataclass(frozen=True)
class PrecondResult:
    G_M: np.ndarray
    transformed_rhs: np.ndarray
    n: int
    cond_before: float
    cond_after: float


def condition_number(G) -> float:
    """2-norm condition number via singular values; inf when singular."""
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise DomainError(f"need a square matrix, got shape {G.shape}")
    if not np.all(np.isfinite(G)):
        raise DomainError("matrix entries must be finite")
    s = np.linalg.svd(G, compute_uv=False)
    if s[-1] == 0.0:
        return math.inf
    return float(s[0] / s[-1])


def precondition(G, U, config: PrecondConfig = None) -> PrecondResult:
    """Scan shift exponents until cond((HR)^-1 G) drops below the target.

    The factorization G = QR (plain Householder, no pivoting) is computed
    once; each candidate HR is LU-factored and applied by triangular
    solves, never through an explicit inverse.  Returns the first n in
    1..n_max that meets the bound, or raises NoShiftFoundError carrying
    the best attempt.
    """
    if config is None:
        config = PrecondConfig()
    G = np.asarray(G, dtype=float)
    U = np.asarray(U, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise DomainError(f"need a square matrix, got shape {G.shape}")
    if U.shape != (G.shape[0],):
        raise DomainError("rhs length must match the matrix size")
    cond_before = condition_number(G)
    Q, R = np.linalg.qr(G)
    best_n, best_cond = None, math.inf
    all_singular = True
    for n in range(1, config.n_max + 1):
        H = Q + 0.5**n
        try:
            lu = lu_factor(H @ R)
            G_M = lu_solve(lu, G)
            rhs = lu_solve(lu, U)
        except (np.linalg.LinAlgError, ValueError):
            continue
        if not (np.all(np.isfinite(G_M)) and np.all(np.isfinite(rhs))):
            continue
        all_singular = False
        cond_after = condition_number(G_M)
        if cond_after <= config.M:
            return PrecondResult(G_M, rhs, n, cond_before, cond_after)
        if cond_after < best_cond:
            best_n, best_cond = n, cond_after
    if all_singular:
        raise SingularError(
            f"H*R singular for every shift exponent up to {config.n_max}"
        )
    raise NoShiftFoundError(best_n, best_cond, config.M)

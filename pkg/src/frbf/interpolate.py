"""Conditionally-positive-definite interpolation with polynomial tails.

The interpolant is sum(lambda_j * Phi(|x - x_j|)) + sum(beta_k * p_k(x)),
solved from the saddle system [[A, P], [P^T, 0]] [lambda; beta] = [u; 0].
The tail {p_k} is either the full multivariate polynomial space of degree
m-1 or the cheaper radial ladder {1, r^(1+o), ..., r^(Q-1+o)} in r = |x|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from scipy.spatial.distance import cdist

from .errors import (
    DomainError,
    LengthMismatchError,
    SingularSystemError,
    SolveError,
)
from .kernels import MonomialSum
from .nodes import NodeSet
from .precond import PrecondConfig, precondition
from .specfun import MonomialTerm

MULTIVARIATE = "multivariate"
RADIAL = "radial"
TAIL_KINDS = (MULTIVARIATE, RADIAL)

_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class TailSpec:
    """Polynomial tail attached to the radial expansion.

    multivariate: all monomials of total degree < m in d variables,
    Q = C(m-1+d, d).  radial: Q = m functions, the constant followed by
    r**(k+o) for k = 1..m-1; o > 0 fractionally lifts the powers so that
    operator images stay continuous.  drop_constant removes the leading 1
    (used when an operator cannot act on constants).
    """

    kind: str
    m: int
    d: int
    o: float = 0.0
    drop_constant: bool = False

    def __post_init__(self):
        if self.kind not in TAIL_KINDS:
            raise DomainError(f"unknown tail kind {self.kind!r}")
        if self.m < 1:
            raise DomainError(f"tail needs m >= 1, got {self.m}")
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if self.kind == MULTIVARIATE and (self.o != 0.0 or self.drop_constant):
            raise DomainError("offset/drop_constant only apply to radial tails")
        if self.o < 0:
            raise DomainError(f"radial offset must be >= 0, got {self.o}")

    @property
    def Q(self) -> int:
        if self.kind == MULTIVARIATE:
            return math.comb(self.m - 1 + self.d, self.d)
        return self.m - 1 if self.drop_constant else self.m


def _multi_exponents(tail: TailSpec):
    """Exponent tuples of the degree-(m-1) basis, graded lexicographic."""
    out = []
    for degree in range(tail.m):
        for dims in combinations_with_replacement(range(tail.d), degree):
            gamma = [0] * tail.d
            for j in dims:
                gamma[j] += 1
            out.append(tuple(gamma))
    return out


def tail_profiles(tail: TailSpec):
    """Radial tail functions as monomial profiles in r (radial kind only)."""
    if tail.kind != RADIAL:
        raise DomainError("only radial tails have radial profiles")
    profiles = []
    if not tail.drop_constant:
        profiles.append(MonomialSum((MonomialTerm(1.0, 0.0),)))
    for k in range(1, tail.m):
        profiles.append(MonomialSum((MonomialTerm(1.0, k + tail.o),)))
    return profiles


def tail_basis(tail: TailSpec):
    """The tail as plain callables on points (d-vectors or (n, d) arrays)."""
    funcs = []
    if tail.kind == MULTIVARIATE:
        for gamma in _multi_exponents(tail):
            exponents = np.array(gamma, dtype=float)

            def mono(x, exponents=exponents):
                x = np.atleast_2d(np.asarray(x, dtype=float))
                vals = np.prod(x**exponents, axis=1)
                return vals if vals.size > 1 else float(vals[0])

            funcs.append(mono)
        return funcs
    for profile in tail_profiles(tail):

        def radial(x, profile=profile):
            x = np.atleast_2d(np.asarray(x, dtype=float))
            vals = profile.evaluate(np.linalg.norm(x, axis=1))
            vals = np.atleast_1d(vals)
            return vals if vals.size > 1 else float(vals[0])

        funcs.append(radial)
    return funcs


def tail_matrix(tail: TailSpec, X) -> np.ndarray:
    """P_{jk} = p_k(x_j) for all points at once."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != tail.d:
        raise DomainError(f"points are {X.shape[1]}-dimensional, tail expects {tail.d}")
    P = np.empty((len(X), tail.Q))
    if tail.kind == MULTIVARIATE:
        for k, gamma in enumerate(_multi_exponents(tail)):
            P[:, k] = np.prod(X ** np.array(gamma, dtype=float), axis=1)
    else:
        r = np.linalg.norm(X, axis=1)
        for k, profile in enumerate(tail_profiles(tail)):
            P[:, k] = profile.evaluate(r)
    return P


@dataclass(frozen=True)
class SaddleSystem:
    """Block system [[A, op_P], [P^T, 0]] with right-hand side rhs.

    For plain interpolation op_P is P itself; collocation rows carry
    operator images of the kernel and tail instead, while the moment
    block P^T always uses the untouched tail values.
    """

    A: np.ndarray
    P: np.ndarray
    rhs: np.ndarray
    op_P: np.ndarray = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        P = np.asarray(self.P, dtype=float).reshape(len(A), -1)
        op_P = self.op_P
        op_P = P if op_P is None else np.asarray(op_P, dtype=float).reshape(len(A), -1)
        rhs = np.asarray(self.rhs, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DomainError(f"A must be square, got {A.shape}")
        if rhs.shape != (A.shape[0] + P.shape[1],):
            raise DomainError("rhs length must be N_p + Q")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "op_P", op_P)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n_points(self) -> int:
        return self.A.shape[0]

    @property
    def Q(self) -> int:
        return self.P.shape[1]

    def full_matrix(self) -> np.ndarray:
        Q = self.Q
        lower = np.hstack([self.P.T, np.zeros((Q, Q))])
        return np.vstack([np.hstack([self.A, self.op_P]), lower])


@dataclass(frozen=True)
class Interpolant:
    """Solved expansion: centers with weights plus tail coefficients."""

    centers: np.ndarray
    lam: np.ndarray
    beta: np.ndarray
    kernel: MonomialSum
    tail: TailSpec

    def __call__(self, x):
        return evaluate_interpolant(self, x)


def kernel_matrix(kernel: MonomialSum, X, Y=None) -> np.ndarray:
    """Phi(|x_j - y_k|) for all pairs."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
    return kernel.evaluate(cdist(X, Y))


def assemble_interpolation(
    nodes: NodeSet, kernel: MonomialSum, tail: TailSpec, values
) -> SaddleSystem:
    """Saddle system for interpolating the given node values."""
    pts = nodes.points
    values = np.asarray(values, dtype=float)
    if values.shape != (len(pts),):
        raise LengthMismatchError(
            f"need one value per node: {len(pts)} nodes, {values.shape} values"
        )
    A = kernel_matrix(kernel, pts)
    P = tail_matrix(tail, pts)
    rhs = np.concatenate([values, np.zeros(tail.Q)])
    return SaddleSystem(A, P, rhs)


def solve_system(system: SaddleSystem, precondition_config: PrecondConfig = None):
    """Solve the saddle system, returning (lam, beta).

    With a PrecondConfig the QR-shift transformation is applied first and
    the residual is checked on the transformed (equivalent) system;
    otherwise the raw system is solved directly.
    """
    G = system.full_matrix()
    U = system.rhs
    if precondition_config is not None:
        result = precondition(G, U, precondition_config)
        G, U = result.G_M, result.transformed_rhs
    try:
        sol = np.linalg.solve(G, U)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"saddle system is singular (centers may lack a unisolvent subset): {exc}"
        ) from exc
    scale = np.linalg.norm(U)
    residual = np.linalg.norm(G @ sol - U) / (scale if scale > 0 else 1.0)
    if not residual <= _RESIDUAL_TOL:
        raise SolveError(f"relative residual {residual:.3e} exceeds {_RESIDUAL_TOL}")
    n = system.n_points
    return sol[:n], sol[n:]


def evaluate_interpolant(s: Interpolant, x):
    """sigma(x) = sum(lam_j Phi(|x - x_j|)) + sum(beta_k p_k(x))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    vals = kernel_matrix(s.kernel, X, s.centers) @ s.lam
    if s.tail.Q:
        vals = vals + tail_matrix(s.tail, X) @ s.beta
    return float(vals[0]) if single else vals


def rmse(truth, approx) -> float:
    """Root mean square error between paired vectors."""
    truth = np.asarray(truth, dtype=float).ravel()
    approx = np.asarray(approx, dtype=float).ravel()
    if truth.shape != approx.shape or truth.size == 0:
        raise LengthMismatchError(
            f"need equal nonzero lengths, got {truth.shape} and {approx.shape}"
        )
    return float(np.sqrt(np.mean((truth - approx) ** 2)))


def weights_to_csv(s: Interpolant, path) -> None:
    """Dump the solved weights: one 'lambda' row per center (with its
    coordinates) followed by one 'beta' row per tail function."""
    import csv

    d = s.centers.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "index", "value"] + [f"x{j + 1}" for j in range(d)])
        for i, (w, center) in enumerate(zip(s.lam, s.centers)):
            writer.writerow(["lambda", i, repr(float(w))]
                            + [repr(float(c)) for c in center])
        for k, w in enumerate(s.beta):
            writer.writerow(["beta", k, repr(float(w))] + [""] * d)

"""Scikit-learn style estimators wrapping the functional interpolation
and collocation pipelines, so they compose with pipelines, clone() and
hyperparameter search."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_mask, check_points, check_vector
from .collocate import (
    CollocationProblem,
    RadialOperator,
    assemble_collocation,
    effective_tail,
    evaluate_operator,
    operator_orders,
)
from .errors import DomainError
from .interpolate import (
    Interpolant,
    TailSpec,
    assemble_interpolation,
    evaluate_interpolant,
    solve_system,
)
from .kernels import KernelSpec, cpd_order, make_kernel, validate_restrictions
from .nodes import Domain, NodeSet
from .precond import PrecondConfig


class RBFInterpolator(BaseEstimator):
    """Scattered-data interpolation with the polynomial radial kernels.

    fit(X, y) solves the saddle system on the training points; predict(X)
    evaluates the interpolant.  The kernel scale b defaults to the largest
    coordinate upper bound seen in fit, and the tail order m defaults to
    the kernel's conditional positive definiteness order.

    Parameters mirror KernelSpec (family, N, alpha, c0, frac_mode,
    frac_kind) plus the tail kind ('multivariate' or 'radial'), the tail
    order m, the radial tail offset o, and the optional condition-bound
    preconditioning (M, n_max).
    """

    def __init__(
        self,
        family="false_tps",
        N=3.22,
        alpha=0.0,
        c0=None,
        frac_mode="exponent_shift",
        frac_kind="riemann_liouville",
        tail="multivariate",
        m=None,
        o=0.0,
        b=None,
        precondition=False,
        M=10.0,
        n_max=64,
    ):
        self.family = family
        self.N = N
        self.alpha = alpha
        self.c0 = c0
        self.frac_mode = frac_mode
        self.frac_kind = frac_kind
        self.tail = tail
        self.m = m
        self.o = o
        self.b = b
        self.precondition = precondition
        self.M = M
        self.n_max = n_max

    def fit(self, X, y):
        X = check_points(X)
        y = check_vector(y, len(X))
        self.b_ = float(X.max()) if self.b is None else float(self.b)
        spec = KernelSpec(
            self.family, self.N, self.alpha, self.b_, self.c0,
            self.frac_mode, self.frac_kind,
        )
        self.kernel_ = make_kernel(spec)
        self.m_ = cpd_order(self.kernel_) if self.m is None else int(self.m)
        self.tail_ = TailSpec(self.tail, self.m_, X.shape[1], self.o)
        nodes = NodeSet(X, np.empty((0, X.shape[1])))
        system = assemble_interpolation(nodes, self.kernel_, self.tail_, y)
        config = PrecondConfig(self.M, self.n_max) if self.precondition else None
        lam, beta = solve_system(system, config)
        self.interpolant_ = Interpolant(X, lam, beta, self.kernel_, self.tail_)
        self.lam_, self.beta_ = lam, beta
        return self

    def predict(self, X):
        if not hasattr(self, "interpolant_"):
            raise DomainError("estimator is not fitted; call fit first")
        X = check_points(X, d=self.interpolant_.centers.shape[1])
        return evaluate_interpolant(self.interpolant_, X)


class KansaCollocator(BaseEstimator):
    """Asymmetric collocation solver for the fractional radial problem.

    fit(X, y, boundary) takes collocation points X, right-hand side
    values y (source values f on interior rows, boundary data g on
    boundary rows) and a boolean mask selecting the boundary rows.
    predict(X) evaluates the solved surrogate u; predict_operator(X)
    evaluates L(u) for residual checks.
    """

    def __init__(
        self,
        beta=-0.5,
        operator_kind="caputo",
        family="false_tps",
        N=3.55,
        alpha=0.0,
        c0=None,
        frac_mode="full_fractional",
        frac_kind="riemann_liouville",
        m=None,
        b=None,
        M=10.0,
        n_max=64,
    ):
        self.beta = beta
        self.operator_kind = operator_kind
        self.family = family
        self.N = N
        self.alpha = alpha
        self.c0 = c0
        self.frac_mode = frac_mode
        self.frac_kind = frac_kind
        self.m = m
        self.b = b
        self.M = M
        self.n_max = n_max

    def fit(self, X, y, boundary):
        X = check_points(X)
        y = check_vector(y, len(X))
        boundary = check_mask(boundary, len(X))
        if not boundary.any():
            raise DomainError("collocation needs at least one boundary row")
        interior_X, boundary_X = X[~boundary], X[boundary]
        interior_y, boundary_y = y[~boundary], y[boundary]
        operator = RadialOperator(self.beta, self.operator_kind)
        q, o = operator_orders(operator)
        self.b_ = float(X.max()) if self.b is None else float(self.b)
        spec = KernelSpec(
            self.family, self.N, self.alpha, self.b_, self.c0,
            self.frac_mode, self.frac_kind,
        )
        validate_restrictions(spec, q)
        self.kernel_ = make_kernel(spec)
        self.m_ = cpd_order(self.kernel_) if self.m is None else int(self.m)
        tail = TailSpec("radial", self.m_, X.shape[1], o)
        domain = Domain(tuple(X.min(axis=0)), tuple(X.max(axis=0)))
        nodes = NodeSet(interior_X, boundary_X)
        problem = CollocationProblem(
            domain, nodes, operator,
            f=lambda pts: _sample_values(pts, interior_X, interior_y),
            g=lambda pts: _sample_values(pts, boundary_X, boundary_y),
        )
        tail, _ = effective_tail(operator, tail)
        system = assemble_collocation(problem, self.kernel_, tail)
        lam, beta_coef = solve_system(system, PrecondConfig(self.M, self.n_max))
        interp = Interpolant(nodes.points, lam, beta_coef, self.kernel_, tail)
        self.operator_ = operator
        self.interpolant_ = interp
        self.tail_ = tail
        # residuals of the two equation blocks at the training rows; a
        # data-only fit has no source function to check off-sample
        self.residual_interior_ = float(
            np.sqrt(np.mean((interior_y - evaluate_operator(interp, operator, interior_X)) ** 2))
        ) if len(interior_X) else 0.0
        self.residual_boundary_ = float(
            np.sqrt(np.mean((boundary_y - evaluate_interpolant(interp, boundary_X)) ** 2))
        )
        return self

    def predict(self, X):
        if not hasattr(self, "interpolant_"):
            raise DomainError("estimator is not fitted; call fit first")
        X = check_points(X, d=self.interpolant_.centers.shape[1])
        return evaluate_interpolant(self.interpolant_, X)

    def predict_operator(self, X):
        if not hasattr(self, "interpolant_"):
            raise DomainError("estimator is not fitted; call fit first")
        X = check_points(X, d=self.interpolant_.centers.shape[1])
        return evaluate_operator(self.interpolant_, self.operator_, X)


def _sample_values(pts, X, y):
    """Values at the training points themselves (assembly never asks for
    anything else along this path)."""
    pts = np.atleast_2d(pts)
    diff = pts[:, None, :] - X[None, :, :]
    idx = np.argmin(np.sum(diff**2, axis=-1), axis=1)
    return y[idx]

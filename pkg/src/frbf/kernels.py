"""Polynomial radial kernels that emulate the thin plate spline.

Each kernel is a short sum of real-power monomials in the radius r, built
by imposing value/derivative conditions at the domain scale b.  Four
families are provided (named by their number of terms and the conditions
used), together with three ways to bend them: shifting one exponent by
alpha, fractionally differentiating one term, or fractionally
differentiating all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    NoNegativeTermError,
    RestrictionError,
    SingularSystemError,
)
from .specfun import (
    RIEMANN_LIOUVILLE,
    DERIVATIVE_KINDS,
    MonomialTerm,
    frac_deriv_monomial,
)

TWO_TERM = "two_term"
THREE_TERM_TPS = "three_term_tps"
FALSE_TPS = "false_tps"
FOUR_TERM = "four_term"
FAMILIES = (TWO_TERM, THREE_TERM_TPS, FALSE_TPS, FOUR_TERM)

FRAC_NONE = "none"
EXPONENT_SHIFT = "exponent_shift"
PARTIAL_FRACTIONAL = "partial_fractional"
FULL_FRACTIONAL = "full_fractional"
FRAC_MODES = (FRAC_NONE, EXPONENT_SHIFT, PARTIAL_FRACTIONAL, FULL_FRACTIONAL)

# alpha ranges admissible per mode (closed below, open above for the shift)
_ALPHA_RANGES = {
    FRAC_NONE: (0.0, 0.0),
    EXPONENT_SHIFT: (0.0, 1.0),
    PARTIAL_FRACTIONAL: (-1.0, 1.0),
    FULL_FRACTIONAL: (-2.0, 2.0),
}

_INT_TOL = 1e-9  # |N - round(N)| below this counts as integer


def _is_integerish(x: float) -> bool:
    return abs(x - round(x)) < _INT_TOL


@dataclass(frozen=True)
class MonomialSum:
    """Radial function sum(c_i * r**p_i), terms sorted by descending power.

    Powers are pairwise distinct; zero-coefficient terms are dropped.
    Kernels additionally keep every power positive (so the value at r=0
    is 0), but operator images may carry zero or negative powers.
    """

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple(
            t for t in sorted(self.terms, key=lambda t: -t.power) if t.coefficient != 0.0
        )
        powers = [t.power for t in terms]
        for hi, lo in zip(powers, powers[1:]):
            if hi - lo < 1e-12:
                raise DomainError(f"duplicate powers in monomial sum: {powers}")
        object.__setattr__(self, "terms", terms)

    @property
    def powers(self) -> np.ndarray:
        return np.array([t.power for t in self.terms])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coefficient for t in self.terms])

    def evaluate(self, r):
        """Evaluate at radius r (scalar or array, r >= 0)."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for t in self.terms:
            out = out + t.coefficient * r**t.power
        return out if out.ndim else float(out)

    __call__ = evaluate

    def derivative(self, order: int = 1) -> "MonomialSum":
        """Classical derivative d^order/dr^order, term by term."""
        new = []
        for t in self.terms:
            c = t.coefficient * _falling_factorial(t.power, order)
            if c != 0.0:
                new.append(MonomialTerm(c, t.power - order))
        return MonomialSum(tuple(new))

    def scaled(self, factor: float) -> "MonomialSum":
        return MonomialSum(
            tuple(MonomialTerm(factor * t.coefficient, t.power) for t in self.terms)
        )


@dataclass(frozen=True)
class KernelSpec:
    """Parameters from which a kernel monomial sum is built.

    b is the domain scale (the largest upper bound of the box the data
    lives in); coefficients absorb it, so the resulting MonomialSum is
    purely numeric.
    """

    family: str
    N: float
    alpha: float = 0.0
    b: float = 1.0
    c0: float = None
    frac_mode: str = EXPONENT_SHIFT
    frac_kind: str = RIEMANN_LIOUVILLE

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown kernel family {self.family!r}")
        if self.frac_mode not in FRAC_MODES:
            raise DomainError(f"unknown frac_mode {self.frac_mode!r}")
        if self.frac_kind not in DERIVATIVE_KINDS:
            raise DomainError(f"unknown frac_kind {self.frac_kind!r}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise DomainError(f"scale b must be positive, got {self.b}")
        if not math.isfinite(self.alpha):
            raise DomainError("alpha must be finite")
        if self.family == THREE_TERM_TPS and self.c0 is not None:
            raise DomainError(
                "three_term_tps has fixed boundary data; c0 is not a parameter"
            )

    def check_alpha_range(self) -> None:
        """Enforce the per-mode admissible alpha interval (build-time check;
        restriction bookkeeping is allowed to probe edge values)."""
        lo, hi = _ALPHA_RANGES[self.frac_mode]
        if self.frac_mode == FRAC_NONE:
            if self.alpha != 0.0:
                raise DomainError("frac_mode 'none' requires alpha = 0")
        elif self.frac_mode == EXPONENT_SHIFT:
            if not lo <= self.alpha < hi:
                raise DomainError(
                    f"alpha={self.alpha} outside [{lo}, {hi}) for exponent_shift"
                )
        elif not lo < self.alpha < hi:
            raise DomainError(
                f"alpha={self.alpha} outside ({lo}, {hi}) for {self.frac_mode}"
            )

    @property
    def c0_value(self) -> float:
        if self.family == THREE_TERM_TPS:
            return math.nan
        return default_c0(self.family) if self.c0 is None else float(self.c0)


def _falling_factorial(p: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= p - i
    return out


def solve_coefficients(powers, derivative_orders, rhs, b: float):
    """Solve the boundary-condition system for kernel coefficients.

    Row k of the matrix holds the derivative_orders[k]-th derivative of
    each r**powers[j], evaluated at r = b; the solution makes
    sum(a_j r**p_j) meet the requested derivative values at b.
    """
    powers = np.asarray(powers, dtype=float)
    orders = np.asarray(derivative_orders, dtype=int)
    rhs = np.asarray(rhs, dtype=float)
    if not powers.shape == orders.shape == rhs.shape or powers.ndim != 1:
        raise DomainError("powers, derivative_orders and rhs must match in length")
    if b <= 0:
        raise SingularSystemError(f"condition matrix is singular for b={b}")
    if len(set(np.round(powers, 12))) != len(powers):
        raise SingularSystemError(f"repeated powers {powers} make the system singular")
    B = np.empty((len(powers), len(powers)))
    for k, o in enumerate(orders):
        for j, p in enumerate(powers):
            B[k, j] = _falling_factorial(p, int(o)) * b ** (p - o)
    try:
        a = np.linalg.solve(B, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"condition matrix is singular: {exc}") from exc
    if not np.all(np.isfinite(a)):
        raise SingularSystemError("condition system produced non-finite coefficients")
    return a


def condition_matrix(powers, derivative_orders, b: float) -> np.ndarray:
    """The matrix of the boundary-condition system (for determinant checks)."""
    powers = np.asarray(powers, dtype=float)
    orders = np.asarray(derivative_orders, dtype=int)
    B = np.empty((len(powers), len(powers)))
    for k, o in enumerate(orders):
        for j, p in enumerate(powers):
            B[k, j] = _falling_factorial(p, int(o)) * b ** (p - o)
    return B


def default_c0(family: str) -> float:
    """Curvature constant that keeps the unit-scale coefficients integral.

    The value is the least common multiple of the closed-form coefficient
    denominators times the sign that makes the kernel convex on (0, 1).
    """
    table = {FALSE_TPS: 4.0, FOUR_TERM: 18.0, TWO_TERM: 1.0}
    if family not in table:
        raise DomainError(f"no default c0 for family {family!r}")
    return table[family]


def family_conditions(spec: KernelSpec):
    """(powers, derivative_orders, rhs) defining the family's system at scale b."""
    N = spec.N
    c0 = spec.c0_value
    if spec.family == TWO_TERM:
        return [N + 1, N], [0, 1], [0.0, c0]
    if spec.family == THREE_TERM_TPS:
        return [N + 2, N + 1, N], [0, 1, 2], [0.0, 1.0, 2.0 * N - 1.0]
    if spec.family == FALSE_TPS:
        return [N + 2, N + 1, N], [0, 1, 2], [0.0, 0.0, -c0]
    return [N + 3, N + 2, N + 1, N], [0, 1, 2, 3], [0.0, 0.0, 0.0, c0]


def _base_kernel(spec: KernelSpec) -> MonomialSum:
    """Closed-form coefficients; must agree with solve_coefficients."""
    N, b = spec.N, spec.b
    c0 = spec.c0_value
    if spec.family == TWO_TERM:
        terms = [(c0 * b**-N, N + 1), (-c0 * b ** (1 - N), N)]
    elif spec.family == THREE_TERM_TPS:
        terms = [
            (0.5 * (2 * N - 1) * b**-N - N * b ** (-N - 1), N + 2),
            ((2 * N + 1) * b**-N - (2 * N - 1) * b ** (1 - N), N + 1),
            (0.5 * (2 * N - 1) * b ** (2 - N) - (N + 1) * b ** (1 - N), N),
        ]
    elif spec.family == FALSE_TPS:
        terms = [
            (-0.5 * c0 * b**-N, N + 2),
            (c0 * b ** (1 - N), N + 1),
            (-0.5 * c0 * b ** (2 - N), N),
        ]
    else:
        terms = [
            (c0 / 6.0 * b**-N, N + 3),
            (-c0 / 2.0 * b ** (1 - N), N + 2),
            (c0 / 2.0 * b ** (2 - N), N + 1),
            (-c0 / 6.0 * b ** (3 - N), N),
        ]
    return MonomialSum(tuple(MonomialTerm(c, p) for c, p in terms))


def make_kernel(spec: KernelSpec) -> MonomialSum:
    """Build the kernel for a spec, applying its exponent/fractional mode."""
    spec.check_alpha_range()
    validate_restrictions(spec)
    if spec.frac_mode in (PARTIAL_FRACTIONAL, FULL_FRACTIONAL):
        return fractionalize(spec)
    base = _base_kernel(spec)
    if spec.frac_mode == EXPONENT_SHIFT and spec.alpha != 0.0:
        return perturb(base, spec.alpha, spec.b)
    return base


def _shift_target(kernel: MonomialSum) -> int:
    """Index of the highest-power term with a negative coefficient."""
    for i, t in enumerate(kernel.terms):  # terms are sorted by descending power
        if t.coefficient < 0:
            return i
    raise NoNegativeTermError("kernel has no negative-coefficient term")


def perturb(kernel: MonomialSum, alpha: float, b: float) -> MonomialSum:
    """Shift the exponent of the dominant negative term down by alpha.

    The term's scale exponent grows by alpha to compensate, i.e. the
    coefficient picks up a factor b**alpha.  alpha = 0 returns the kernel
    unchanged.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"exponent shift needs alpha in [0, 1), got {alpha}")
    if alpha == 0.0:
        _shift_target(kernel)  # still insist a perturbable term exists
        return kernel
    i = _shift_target(kernel)
    terms = list(kernel.terms)
    t = terms[i]
    terms[i] = MonomialTerm(t.coefficient * b**alpha, t.power - alpha)
    return MonomialSum(tuple(terms))


def fractionalize(spec: KernelSpec) -> MonomialSum:
    """Replace exponent shifts by true fractional derivatives of the terms.

    partial_fractional transforms only the term the exponent shift would
    touch; full_fractional transforms every term.  Either way a term
    c*r**p becomes c * b**alpha * D^alpha r**p.
    """
    if spec.frac_mode not in (PARTIAL_FRACTIONAL, FULL_FRACTIONAL):
        raise DomainError(
            f"fractionalize needs a fractional mode, got {spec.frac_mode!r}"
        )
    spec.check_alpha_range()
    validate_restrictions(spec)
    base = _base_kernel(spec)
    if spec.frac_mode == PARTIAL_FRACTIONAL:
        targets = {_shift_target(base)}
    else:
        targets = set(range(len(base.terms)))
    scale = spec.b**spec.alpha
    new_terms = []
    for i, t in enumerate(base.terms):
        if i in targets:
            d = frac_deriv_monomial(t.power, spec.alpha, spec.frac_kind)
            term = MonomialTerm(t.coefficient * scale * d.coefficient, d.power)
        else:
            term = t
        if term.power <= 0:
            raise RestrictionError(
                f"fractionalized power {term.power} is not positive "
                f"(N={spec.N}, alpha={spec.alpha})"
            )
        new_terms.append(term)
    return MonomialSum(tuple(new_terms))


def evaluate(kernel: MonomialSum, r):
    """Value of the kernel at radius r >= 0 (scalar or array)."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise DomainError("radius must be non-negative")
    return kernel.evaluate(r)


def cpd_order(kernel: MonomialSum) -> int:
    """Conditional positive definiteness order of the kernel.

    Each power term r**p is conditionally positive definite of order
    ceil(p/2), and the order is inherited upward, so the largest power
    decides.  Integer powers are rejected; they degenerate to ordinary
    polynomials.
    """
    m = 0
    for t in kernel.terms:
        if _is_integerish(t.power):
            raise RestrictionError(
                f"power {t.power} is an integer; kernel is not admissible"
            )
        m = max(m, math.ceil(t.power / 2.0))
    return m


def _powers_at(spec: KernelSpec, alpha: float):
    """Kernel powers for an alpha value, by pure exponent bookkeeping."""
    base = _base_kernel(spec)
    powers = [t.power for t in base.terms]
    if spec.frac_mode == FRAC_NONE or alpha == 0.0:
        return powers
    if spec.frac_mode == FULL_FRACTIONAL:
        return [p - alpha for p in powers]
    i = _shift_target(base)
    powers[i] -= alpha
    return powers


def sweep_cpd_order(spec: KernelSpec, alpha_lo: float, alpha_hi: float) -> int:
    """Tail order covering a whole alpha sweep.

    The order is evaluated at both ends of the alpha interval and the
    larger one is kept, so a single polynomial tail serves every kernel
    in the sweep.
    """
    m = 0
    for a in (alpha_lo, alpha_hi):
        for p in _powers_at(spec, a):
            m = max(m, math.ceil(p / 2.0))
    return m


def validate_restrictions(spec: KernelSpec, q: float = 0.0) -> None:
    """Check the exponent restrictions, including the operator-order one.

    N and N - alpha must stay away from the integers (so the kernel is a
    genuine radial function rather than a polynomial), and N must exceed
    q + alpha (or alpha alone when the operator order q is <= 0) so that
    operator images keep positive powers.
    """
    N, a = spec.N, spec.alpha
    if not math.isfinite(N) or N <= 0:
        raise RestrictionError(f"N must be positive and finite, got {N}")
    if _is_integerish(N):
        raise RestrictionError(f"N={N} must not be a natural number")
    if _is_integerish(N - a):
        raise RestrictionError(f"N - alpha = {N - a} must not be a natural number")
    if q > 0:
        if not N > q + a:
            raise RestrictionError(
                f"operator order requires N > q + alpha = {q + a}, got N={N}"
            )
    elif not N > a:
        raise RestrictionError(f"need N > alpha, got N={N}, alpha={a}")

"""Polynomial false-TPS radial kernels, conditionally-positive-definite
interpolation with QR-shift preconditioning, and asymmetric collocation
for fractional radial differential equations."""

from .errors import (
    DimensionError,
    DomainError,
    DuplicateNodeError,
    FrbfError,
    LengthMismatchError,
    NoNegativeTermError,
    NoShiftFoundError,
    PoleError,
    RestrictionError,
    SingularError,
    SingularSystemError,
    SolveError,
)
from .specfun import (
    CAPUTO,
    RIEMANN_LIOUVILLE,
    MonomialTerm,
    frac_deriv_monomial,
    gamma,
)
from .kernels import (
    EXPONENT_SHIFT,
    FALSE_TPS,
    FAMILIES,
    FOUR_TERM,
    FRAC_NONE,
    FULL_FRACTIONAL,
    PARTIAL_FRACTIONAL,
    THREE_TERM_TPS,
    TWO_TERM,
    KernelSpec,
    MonomialSum,
    cpd_order,
    default_c0,
    evaluate,
    fractionalize,
    make_kernel,
    perturb,
    solve_coefficients,
    sweep_cpd_order,
    validate_restrictions,
)
from .nodes import (
    Domain,
    NodeSet,
    halton_points,
    make_node_set,
    nodes_from_csv,
    nodes_to_csv,
)
from .interpolate import (
    Interpolant,
    SaddleSystem,
    TailSpec,
    assemble_interpolation,
    evaluate_interpolant,
    rmse,
    solve_system,
    tail_basis,
)
from .precond import PrecondConfig, PrecondResult, condition_number, precondition
from .collocate import (
    CollocationProblem,
    CollocationReport,
    RadialOperator,
    apply_operator,
    assemble_collocation,
    evaluate_operator,
    operator_orders,
    solve_collocation,
)
from .estimators import KansaCollocator, RBFInterpolator

__version__ = "0.1.0"

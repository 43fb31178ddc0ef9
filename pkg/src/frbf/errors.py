"""Exception types shared across the library."""


class FrbfError(Exception):
    """Base class for all library-specific errors."""


class PoleError(FrbfError, ValueError):
    """Gamma evaluated at 0 or a negative integer, or a derivative
    coefficient lands on such a pole (inadmissible power/order pair)."""


class DomainError(FrbfError, ValueError):
    """Argument outside the admissible domain of an operation."""


class RestrictionError(FrbfError, ValueError):
    """Kernel parameter restrictions violated (integer exponent,
    exponent not dominating the operator order, ...)."""


class NoNegativeTermError(FrbfError, ValueError):
    """Exponent perturbation requested on a kernel that has no
    negative-coefficient term to perturb."""


class SingularSystemError(FrbfError, ValueError):
    """A construction or interpolation matrix is numerically singular."""


class SolveError(FrbfError, RuntimeError):
    """Linear solve finished but the residual check failed."""


class SingularError(FrbfError, ValueError):
    """Matrix singular to machine precision."""


class NoShiftFoundError(FrbfError, RuntimeError):
    """No shift exponent achieved the target condition bound.

    Carries the best attempt as ``best_n`` / ``best_cond``.
    """

    def __init__(self, best_n, best_cond, target):
        self.best_n = best_n
        self.best_cond = best_cond
        self.target = target
        super().__init__(
            f"no shift exponent reached cond <= {target}; "
            f"best was n={best_n} with cond={best_cond:.6g}"
        )


class DimensionError(FrbfError, ValueError):
    """Requested dimension not supported."""


class DuplicateNodeError(FrbfError, ValueError):
    """Node set contains (nearly) coincident points."""


class LengthMismatchError(FrbfError, ValueError):
    """Paired vectors have different lengths."""

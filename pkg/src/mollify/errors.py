"""Exception and warning types shared across the package."""


class MollifyError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MollifyError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class NonIntegrableTail(MollifyError, ValueError):
    """A tail envelope does not decay fast enough to be integrable."""


class DivergentTail(MollifyError):
    """The J2 envelope has a negative net rate and no integrable power."""


class SingularPoint(MollifyError, ValueError):
    """Evaluation requested at a removable singularity without opting in."""


class InfeasibleCrossing(MollifyError):
    """Affine exponent lines do not cross where they should."""


class DenominatorMismatch(MollifyError):
    """A candidate denominator failed the tail-vanishing certificate."""


class BoundaryZero(MollifyError, ValueError):
    """A zero lies on (or numerically on) the boundary of a box."""


class BranchFailure(MollifyError):
    """A logarithm factor would cross its principal branch cut."""


class NoConvergence(MollifyError):
    """A series could not be certified within the allowed number of terms."""


class ToleranceNotReached(UserWarning):
    """Adaptive quadrature ran out of subdivisions; the best value is returned."""

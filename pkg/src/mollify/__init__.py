"""Numerics and exact checks for mollified second moments of Rankin-Selberg L-functions."""

__version__ = "0.1.0"

from .errors import (BoundaryZero, BranchFailure, DenominatorMismatch, DivergentTail,
                     DomainError, InfeasibleCrossing, MollifyError, NoConvergence,
                     NonIntegrableTail, SingularPoint, ToleranceNotReached)
from .kernels import BACKEND
from .moment import (BoundResult, BoxParams, MollifierPolynomial, MomentParams,
                     default_p, eval_v, zero_bound)
from .optimizer import OptimizationResult, SearchSpace, evaluate_theorem_a, optimize
from .quadrature import QuadratureSpec, TailEnvelope

__all__ = [
    "__version__", "BACKEND",
    "MollifyError", "DomainError", "NonIntegrableTail", "DivergentTail", "SingularPoint",
    "InfeasibleCrossing", "DenominatorMismatch", "BoundaryZero", "BranchFailure",
    "NoConvergence", "ToleranceNotReached",
    "QuadratureSpec", "TailEnvelope",
    "MollifierPolynomial", "MomentParams", "BoxParams", "BoundResult",
    "default_p", "eval_v", "zero_bound",
    "SearchSpace", "OptimizationResult", "evaluate_theorem_a", "optimize",
]

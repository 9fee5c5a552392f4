"""Residual-optimal Hermite cubic spline solutions of linear ODEs.

The solution of ``x' = A(t) x + q(t)`` is sought among C1 piecewise cubics on
a fixed mesh. The squared L2 norm of the residual is a quadratic form in the
knot values and slopes; after substituting the endpoint constraints its
normal equations are solved by conjugate gradients.
"""

from .analysis import (
    ErrorReport,
    ReferenceSolution,
    error_report,
    global_error,
    hermite_interpolant,
    matrix_exponential,
    reference_bvp,
    reference_ivp,
    residual_at,
    residual_error,
)
from .assembly import (
    QuadraticForm,
    ReducedSystem,
    apply_boundary_conditions,
    assemble_element,
    assemble_global,
    element_residual,
    local_coefficients,
)
from .banded import SymmetricBandedMatrix
from .expression import eval_expression, parse_expression
from .model import BoundaryConditions, Constraint, Endpoint, LinearOdeSystem, eval_system
from .pipeline import SolveReport, condition_number, solve
from .quadrature import QuadRule, gauss_legendre
from .solver import CgConfig, CgStats, Preconditioner, banded_matvec, conjugate_gradient, direct_solve
from .spline import HermiteSpline, Mesh, basis, basis_deriv, spline_deriv_eval, spline_eval

__version__ = "0.1.0"

__all__ = [
    "ErrorReport",
    "ReferenceSolution",
    "error_report",
    "global_error",
    "hermite_interpolant",
    "matrix_exponential",
    "reference_bvp",
    "reference_ivp",
    "residual_at",
    "residual_error",
    "QuadraticForm",
    "ReducedSystem",
    "apply_boundary_conditions",
    "assemble_element",
    "assemble_global",
    "element_residual",
    "local_coefficients",
    "SymmetricBandedMatrix",
    "eval_expression",
    "parse_expression",
    "BoundaryConditions",
    "Constraint",
    "Endpoint",
    "LinearOdeSystem",
    "eval_system",
    "SolveReport",
    "condition_number",
    "solve",
    "QuadRule",
    "gauss_legendre",
    "CgConfig",
    "CgStats",
    "Preconditioner",
    "banded_matvec",
    "conjugate_gradient",
    "direct_solve",
    "HermiteSpline",
    "Mesh",
    "basis",
    "basis_deriv",
    "spline_deriv_eval",
    "spline_eval",
]

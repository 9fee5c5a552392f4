"""Residual and forward-error measurement, and reference solutions to compare against."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .model import BoundaryConditions, Endpoint, LinearOdeSystem
from .quadrature import QuadRule, gauss_legendre
from .spline import HermiteSpline, Mesh, spline_deriv_eval, spline_eval

__all__ = [
    "ErrorReport",
    "ReferenceKind",
    "ReferenceSolution",
    "IllPosedProblemError",
    "residual_at",
    "residual_error",
    "matrix_exponential",
    "reference_ivp",
    "reference_bvp",
    "global_error",
    "hermite_interpolant",
    "error_report",
]

# Gauss points per fine subinterval of the matrix-exponential reference.
_REFERENCE_GAUSS = 10
# Fine grid is this many times denser than the base step (mesh h_min, or interval/16).
DEFAULT_DENSE_FACTOR = 64


class IllPosedProblemError(ValueError):
    pass


def residual_at(s: HermiteSpline, sys: LinearOdeSystem, t: float) -> np.ndarray:
    """``x~'(t) - A(t) x~(t) - q(t)``."""
    return spline_deriv_eval(s, t) - sys.A(t) @ spline_eval(s, t) - sys.q(t)


def residual_error(s: HermiteSpline, sys: LinearOdeSystem, rule: QuadRule | None = None) -> float:
    """L2 norm of the residual over the mesh, by per-element Gauss quadrature."""
    rule = rule or gauss_legendre(8)
    knots = s.mesh.knots
    total = 0.0
    for i in range(s.mesh.m):
        h = knots[i + 1] - knots[i]
        acc = 0.0
        for tau, w in zip(rule.nodes, rule.weights):
            d = residual_at(s, sys, knots[i] + tau * h)
            acc += w * float(d @ d)
        total += h * acc
    return math.sqrt(total)


def matrix_exponential(A, t: float = 1.0) -> np.ndarray:
    """``exp(A t)`` by scaling and squaring with a Pade core."""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    with np.errstate(over="ignore", invalid="ignore"):
        out = scipy.linalg.expm(A * t)
    if not np.all(np.isfinite(out)):
        raise ArithmeticError(f"matrix exponential overflowed for t={float(t)!r}")
    return out


class ReferenceKind(enum.Enum):
    MATRIX_EXPONENTIAL = "matrix_exponential"
    FINE_INTEGRATOR = "fine_integrator"


@dataclass(frozen=True, eq=False)
class ReferenceSolution:
    kind: ReferenceKind
    evaluator: Callable[[float], np.ndarray]
    initial_state: np.ndarray

    def __call__(self, t: float) -> np.ndarray:
        return self.evaluator(t)


def _fine_grid(sys, dense_factor, mesh):
    if dense_factor < 1:
        raise ValueError("dense_factor must be >= 1")
    t0, tm = sys.interval
    base = float(np.min(mesh.steps)) if mesh is not None else (tm - t0) / 16.0
    steps = int(math.ceil((tm - t0) / base * dense_factor - 1e-9))
    return np.linspace(t0, tm, steps + 1)


def _check_range(sys, t):
    t0, tm = sys.interval
    if not t0 <= t <= tm:
        raise ValueError(f"t={float(t)!r} outside the reference interval [{t0}, {tm}]")


class _MatexpPropagator:
    """Variation of constants for constant ``A`` with Gauss quadrature of the forcing."""

    def __init__(self, sys):
        self.sys = sys
        self.A = sys.A(sys.interval[0])
        self.rule = gauss_legendre(_REFERENCE_GAUSS)

    def step(self, x, s, dt):
        """State at ``s + dt`` from state ``x`` at ``s``."""
        nodes, weights = self.rule.nodes, self.rule.weights
        lags = np.concatenate([[dt], dt * (1.0 - nodes)])
        exps = scipy.linalg.expm(self.A[None, :, :] * lags[:, None, None])
        out = exps[0] @ x
        for k in range(nodes.size):
            out = out + (dt * weights[k]) * (exps[k + 1] @ self.sys.q(s + nodes[k] * dt))
        return out


def _rk4_step(sys, x, s, dt):
    k1 = sys.A(s) @ x + sys.q(s)
    mid = s + 0.5 * dt
    A_mid, q_mid = sys.A(mid), sys.q(mid)
    k2 = A_mid @ (x + 0.5 * dt * k1) + q_mid
    k3 = A_mid @ (x + 0.5 * dt * k2) + q_mid
    end = s + dt
    k4 = sys.A(end) @ (x + dt * k3) + sys.q(end)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def reference_ivp(
    sys: LinearOdeSystem,
    x0,
    dense_factor: int = DEFAULT_DENSE_FACTOR,
    mesh: Mesh | None = None,
    method: str = "auto",
) -> ReferenceSolution:
    """High-accuracy solution of the IVP with ``x(t0) = x0``.

    States are precomputed on a uniform fine grid; evaluation at any ``t``
    takes one partial step from the grid point at or below ``t``.

    Parameters
    ----------
    method : {"auto", "matexp", "rk4"}
        ``"matexp"`` (constant ``A`` only) propagates with ``exp(A h)`` and
        integrates the forcing convolution by Gauss quadrature. ``"rk4"`` is
        classical Runge-Kutta. ``"auto"`` picks matexp when ``A`` is constant.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (sys.n,):
        raise ValueError(f"x0 must have shape ({sys.n},)")
    if method == "auto":
        method = "matexp" if sys.constant_a else "rk4"
    if method == "matexp":
        if not sys.constant_a:
            raise ValueError("matrix-exponential reference requires a constant A")
        step = _MatexpPropagator(sys).step
        kind = ReferenceKind.MATRIX_EXPONENTIAL
    elif method == "rk4":
        step = lambda x, s, dt: _rk4_step(sys, x, s, dt)  # noqa: E731
        kind = ReferenceKind.FINE_INTEGRATOR
    else:
        raise ValueError(f"unknown reference method {method!r}")

    grid = _fine_grid(sys, dense_factor, mesh)
    states = np.empty((grid.size, sys.n))
    states[0] = x0
    for k in range(grid.size - 1):
        states[k + 1] = step(states[k], grid[k], grid[k + 1] - grid[k])

    def evaluate(t):
        _check_range(sys, t)
        k = int(np.searchsorted(grid, t, side="right")) - 1
        k = min(k, grid.size - 1)
        dt = t - grid[k]
        if dt == 0.0:
            return states[k].copy()
        return step(states[k], grid[k], dt)

    return ReferenceSolution(kind, evaluate, x0.copy())


def reference_bvp(
    sys: LinearOdeSystem,
    bcs: BoundaryConditions,
    dense_factor: int = DEFAULT_DENSE_FACTOR,
    mesh: Mesh | None = None,
) -> ReferenceSolution:
    """Solve a two-point BVP with constant ``A`` by the fundamental-matrix method.

    With ``x(tm) = Phi x(t0) + p``, where ``Phi = exp(A (tm - t0))`` and ``p``
    is the particular solution from a zero start, each constraint gives one
    linear equation in ``x(t0)``.
    """
    n = sys.n
    if not sys.constant_a:
        raise ValueError("BVP reference requires a constant A")
    bcs.validate(n)
    if len(bcs.constraints) != n:
        raise IllPosedProblemError(f"need exactly n={n} constraints, got {len(bcs.constraints)}")
    t0, tm = sys.interval
    phi = matrix_exponential(sys.A(t0), tm - t0)
    p = reference_ivp(sys, np.zeros(n), dense_factor, mesh, method="matexp")(tm)
    M = np.zeros((n, n))
    rhs = np.zeros(n)
    for row, c in enumerate(bcs.constraints):
        if c.endpoint is Endpoint.LEFT:
            M[row, c.component] = 1.0
            rhs[row] = c.value
        else:
            M[row] = phi[c.component]
            rhs[row] = c.value - p[c.component]
    if np.linalg.matrix_rank(M) < n:
        raise IllPosedProblemError("boundary map is singular; the BVP is ill-posed")
    x0 = np.linalg.solve(M, rhs)
    return reference_ivp(sys, x0, dense_factor, mesh, method="matexp")


def global_error(
    s: HermiteSpline,
    ref: ReferenceSolution,
    rule: QuadRule | None = None,
    refinement: int = 8,
) -> float:
    """L2 norm of ``x* - x~``, with every mesh interval split ``refinement`` times."""
    rule = rule or gauss_legendre(8)
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    knots = s.mesh.knots
    total = 0.0
    for i in range(s.mesh.m):
        sub = np.linspace(knots[i], knots[i + 1], refinement + 1)
        for a, b in zip(sub[:-1], sub[1:]):
            h = b - a
            ts = a + rule.nodes * h
            diff = np.array([ref(t) for t in ts]) - spline_eval(s, ts)
            total += h * float(rule.weights @ np.sum(diff * diff, axis=1))
    return math.sqrt(total)


def hermite_interpolant(ref: ReferenceSolution, sys: LinearOdeSystem, mesh: Mesh) -> HermiteSpline:
    """Spline through the reference values, with slopes ``A x* + q`` from the ODE."""
    values = np.array([ref(t) for t in mesh.knots])
    derivs = np.array([sys.A(t) @ x + sys.q(t) for t, x in zip(mesh.knots, values)])
    return HermiteSpline(mesh, values, derivs)


@dataclass
class ErrorReport:
    residual_error: float
    global_error: float | None = None
    # (t, ||delta(t)||, ||x*(t) - x~(t)|| or None)
    pointwise_samples: list[tuple[float, float, float | None]] = field(default_factory=list)


def error_report(
    s: HermiteSpline,
    sys: LinearOdeSystem,
    rule: QuadRule | None = None,
    ref: ReferenceSolution | None = None,
    sample_times=None,
    refinement: int = 8,
) -> ErrorReport:
    samples = []
    for t in [] if sample_times is None else sample_times:
        t = float(t)
        dnorm = float(np.linalg.norm(residual_at(s, sys, t)))
        fnorm = None if ref is None else float(np.linalg.norm(ref(t) - spline_eval(s, t)))
        samples.append((t, dnorm, fnorm))
    return ErrorReport(
        residual_error(s, sys, rule),
        None if ref is None else global_error(s, ref, rule, refinement),
        samples,
    )

"""Quadratic form of the squared L2 residual over Hermite spline unknowns.

The unknown vector is ``y = (x_0, x'_0, x_1, x'_1, ..., x_m, x'_m)``. On
interval ``i`` the residual is linear in the local slice
``y_i = (x_i, x'_i, x_{i+1}, x'_{i+1})``::

    delta(t) = G(tau) y_i - q(t),    G = [a | b | c | d]

so its integral is ``y_i^T F_i y_i - 2 B_i^T y_i + int q^T q``. Adjacent
element blocks overlap on the shared knot's ``2n`` unknowns, which makes the
global matrix banded with half-bandwidth ``4n - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .banded import SymmetricBandedMatrix
from .model import BoundaryConditions, Endpoint, LinearOdeSystem
from .quadrature import QuadRule, gauss_legendre
from .spline import Mesh, basis, basis_deriv

__all__ = [
    "ElementForm",
    "QuadraticForm",
    "ReducedSystem",
    "local_coefficients",
    "coefficient_block",
    "element_residual",
    "assemble_element",
    "assemble_global",
    "apply_boundary_conditions",
    "eliminate",
]


def local_coefficients(sys: LinearOdeSystem, mesh: Mesh, i: int, tau: float):
    """Coefficient matrices ``(a, b, c, d)`` of interval ``i`` at local time ``tau``."""
    h = mesh.knots[i + 1] - mesh.knots[i]
    t = mesh.knots[i] + tau * h
    A = sys.A(t)
    E = np.eye(sys.n)
    a0, a1, b0, b1 = (float(v) for v in basis(tau))
    da0, da1, db0, db1 = (float(v) for v in basis_deriv(tau))
    return (
        (da0 / h) * E - a0 * A,
        da1 * E - (h * a1) * A,
        (db0 / h) * E - b0 * A,
        db1 * E - (h * b1) * A,
    )


def coefficient_block(sys, mesh, i, tau) -> np.ndarray:
    """``G = [a | b | c | d]`` of shape (n, 4n)."""
    return np.hstack(local_coefficients(sys, mesh, i, tau))


def element_residual(sys, mesh, i, tau, y_i) -> np.ndarray:
    """Residual ``delta(t)`` at ``t = t_i + tau h_i`` from the local unknowns."""
    h = mesh.knots[i + 1] - mesh.knots[i]
    t = mesh.knots[i] + tau * h
    return coefficient_block(sys, mesh, i, tau) @ np.asarray(y_i, dtype=float) - sys.q(t)


@dataclass(frozen=True, eq=False)
class ElementForm:
    f_local: np.ndarray  # (4n, 4n)
    b_local: np.ndarray  # (4n,)
    c_local: float


def assemble_element(sys, mesh, i, rule: QuadRule | None = None) -> ElementForm:
    """Element integrals of ``G^T G``, ``G^T q`` and ``q^T q`` on interval ``i``."""
    rule = rule or gauss_legendre(8)
    n = sys.n
    h = mesh.knots[i + 1] - mesh.knots[i]
    f = np.zeros((4 * n, 4 * n))
    b = np.zeros(4 * n)
    c = 0.0
    for tau, w in zip(rule.nodes, rule.weights):
        G = coefficient_block(sys, mesh, i, tau)
        q = sys.q(mesh.knots[i] + tau * h)
        f += w * (G.T @ G)
        b += w * (G.T @ q)
        c += w * float(q @ q)
    f = h * 0.5 * (f + f.T)
    return ElementForm(f, h * b, h * c)


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Objective ``y^T F y - 2 B^T y + c`` over all spline unknowns."""

    f_global: SymmetricBandedMatrix
    b_global: np.ndarray
    c_global: float
    n: int
    mesh: Mesh

    @property
    def size(self) -> int:
        return self.b_global.size

    def index(self, knot: int, kind: str, component: int) -> int:
        """Global position of ``x_knot`` (kind 'value') or ``x'_knot`` (kind 'deriv')."""
        if kind == "value":
            return 2 * knot * self.n + component
        if kind == "deriv":
            return (2 * knot + 1) * self.n + component
        raise ValueError(f"unknown kind {kind!r}")

    def objective(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return float(y @ self.f_global.matvec(y) - 2.0 * self.b_global @ y + self.c_global)

    def gradient(self, y) -> np.ndarray:
        return 2.0 * (self.f_global.matvec(np.asarray(y, dtype=float)) - self.b_global)


def assemble_global(sys: LinearOdeSystem, mesh: Mesh, rule: QuadRule | None = None) -> QuadraticForm:
    """Scatter all element forms into the global banded matrix, in element order."""
    t0, tm = sys.interval
    if mesh.knots[0] != t0 or mesh.knots[-1] != tm:
        raise ValueError(
            f"mesh spans [{mesh.knots[0]}, {mesh.knots[-1]}] but the system interval is [{t0}, {tm}]"
        )
    rule = rule or gauss_legendre(8)
    n = sys.n
    size = 2 * n * (mesh.m + 1)
    f = SymmetricBandedMatrix.zeros(size, 4 * n - 1)
    b = np.zeros(size)
    c = 0.0
    for i in range(mesh.m):
        el = assemble_element(sys, mesh, i, rule)
        start = 2 * i * n
        f.add_block(start, el.f_local)
        b[start : start + 4 * n] += el.b_local
        c += el.c_local
    return QuadraticForm(f, b, c, n, mesh)


@dataclass(frozen=True, eq=False)
class ReducedSystem:
    """Normal equations on the free unknowns after substituting fixed ones.

    ``constant`` makes the reduced objective equal the full one:
    ``z^T F_red z - 2 b_red^T z + constant``.
    """

    f_red: SymmetricBandedMatrix
    b_red: np.ndarray
    constant: float
    free_indices: np.ndarray
    fixed_indices: np.ndarray
    fixed_values: np.ndarray

    @property
    def size(self) -> int:
        return self.b_red.size

    def expand(self, z) -> np.ndarray:
        """Full unknown vector from reduced unknowns ``z``."""
        y = np.empty(self.free_indices.size + self.fixed_indices.size)
        y[self.free_indices] = z
        y[self.fixed_indices] = self.fixed_values
        return y

    def restrict(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float)[self.free_indices]

    def objective(self, z) -> float:
        z = np.asarray(z, dtype=float)
        return float(z @ self.f_red.matvec(z) - 2.0 * self.b_red @ z + self.constant)


def eliminate(qf: QuadraticForm, fixed: dict[int, float], allow_derivatives: bool = False) -> ReducedSystem:
    """Remove the rows and columns of ``fixed`` unknowns and move them to the RHS.

    Only value unknowns at the first or last knot may be fixed unless
    ``allow_derivatives`` is set.
    """
    n, m = qf.n, qf.mesh.m
    endpoint_values = set(range(n)) | set(range(2 * m * n, 2 * m * n + n))
    for k in fixed:
        if not 0 <= k < qf.size:
            raise ValueError(f"unknown index {k} out of range")
        if not allow_derivatives and k not in endpoint_values:
            raise ValueError(
                f"index {k} is not an endpoint value unknown; derivatives and interior "
                "knots cannot be constrained"
            )
    fixed_idx = np.array(sorted(fixed), dtype=int)
    fixed_val = np.array([fixed[k] for k in fixed_idx], dtype=float)
    free_idx = np.setdiff1d(np.arange(qf.size), fixed_idx)

    F = qf.f_global
    b_red = qf.b_global[free_idx].copy()
    for k, v in zip(fixed_idx, fixed_val):
        if v != 0.0:
            b_red -= v * F.get(free_idx, k)
    ff = F.get(fixed_idx[:, None], fixed_idx[None, :])
    constant = float(fixed_val @ ff @ fixed_val - 2.0 * qf.b_global[fixed_idx] @ fixed_val + qf.c_global)
    return ReducedSystem(F.submatrix(free_idx), b_red, constant, free_idx, fixed_idx, fixed_val)


def apply_boundary_conditions(
    qf: QuadraticForm,
    bcs: BoundaryConditions,
    pinned_initial_derivative=None,
) -> ReducedSystem:
    """Substitute endpoint value constraints into the quadratic form.

    An IVP fixes ``x_0`` and therefore drops exactly the first ``n`` rows and
    columns. ``pinned_initial_derivative`` additionally fixes ``x'_0``.
    """
    n, m = qf.n, qf.mesh.m
    bcs.validate(n)
    fixed = {}
    for c in bcs.constraints:
        knot = 0 if c.endpoint is Endpoint.LEFT else m
        fixed[qf.index(knot, "value", c.component)] = float(c.value)
    if pinned_initial_derivative is None:
        return eliminate(qf, fixed)
    for j, v in enumerate(np.asarray(pinned_initial_derivative, dtype=float)):
        fixed[qf.index(0, "deriv", j)] = float(v)
    return eliminate(qf, fixed, allow_derivatives=True)

"""C1 piecewise-cubic Hermite splines on a fixed mesh."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Mesh",
    "HermiteSpline",
    "basis",
    "basis_deriv",
    "spline_eval",
    "spline_deriv_eval",
]


def basis(tau):
    """Cubic Hermite basis ``(alpha0, alpha1, beta0, beta1)`` at ``tau``.

    ``alpha*`` weight the left knot's value and scaled slope, ``beta*`` the
    right knot's. Works elementwise on arrays.
    """
    tau = np.asarray(tau, dtype=float)
    t2 = tau * tau
    t3 = t2 * tau
    return (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + tau,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )


def basis_deriv(tau):
    """d/dtau of :func:`basis`."""
    tau = np.asarray(tau, dtype=float)
    t2 = tau * tau
    return (
        6.0 * t2 - 6.0 * tau,
        3.0 * t2 - 4.0 * tau + 1.0,
        -6.0 * t2 + 6.0 * tau,
        3.0 * t2 - 2.0 * tau,
    )


@dataclass(frozen=True, eq=False)
class Mesh:
    """Strictly increasing knots ``t_0 < ... < t_m`` with ``m >= 2``."""

    knots: np.ndarray

    def __post_init__(self):
        knots = np.array(self.knots, dtype=float)
        if knots.ndim != 1 or knots.size < 3:
            raise ValueError("a mesh needs at least 3 knots (m >= 2)")
        if not np.all(np.isfinite(knots)):
            raise ValueError("mesh knots must be finite")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("mesh knots must be strictly increasing")
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)

    @classmethod
    def uniform(cls, t0: float, tm: float, points: int) -> "Mesh":
        return cls(np.linspace(t0, tm, points))

    @property
    def m(self) -> int:
        """Number of intervals."""
        return self.knots.size - 1

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.knots)

    def refine(self) -> "Mesh":
        """Bisect every interval, keeping all existing knots."""
        mids = 0.5 * (self.knots[:-1] + self.knots[1:])
        out = np.empty(2 * self.m + 1)
        out[0::2] = self.knots
        out[1::2] = mids
        return Mesh(out)

    def locate(self, t):
        """Interval index for each ``t``; interior knots go to the left interval."""
        t = np.asarray(t, dtype=float)
        lo, hi = self.knots[0], self.knots[-1]
        if np.any((t < lo) | (t > hi)) or not np.all(np.isfinite(t)):
            raise ValueError(f"t outside mesh range [{lo}, {hi}]")
        idx = np.searchsorted(self.knots, t, side="left") - 1
        return np.clip(idx, 0, self.m - 1)


@dataclass(frozen=True, eq=False)
class HermiteSpline:
    """Per-knot values ``x_i`` and derivatives ``x'_i``, each of shape (m+1, n)."""

    mesh: Mesh
    values: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        derivs = np.array(self.derivs, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if derivs.ndim == 1:
            derivs = derivs[:, None]
        k = self.mesh.knots.size
        if values.shape[0] != k or derivs.shape != values.shape:
            raise ValueError(
                f"values/derivs must both have shape ({k}, n); "
                f"got {values.shape} and {derivs.shape}"
            )
        values.setflags(write=False)
        derivs.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "derivs", derivs)

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_vector(cls, mesh: Mesh, y, n: int) -> "HermiteSpline":
        """Unpack ``y = (x_0, x'_0, x_1, x'_1, ...)``."""
        y = np.asarray(y, dtype=float).reshape(mesh.knots.size, 2, n)
        return cls(mesh, y[:, 0, :], y[:, 1, :])

    def to_vector(self) -> np.ndarray:
        return np.stack([self.values, self.derivs], axis=1).ravel()

    def __call__(self, t):
        return spline_eval(self, t)

    def derivative(self, t):
        return spline_deriv_eval(self, t)


def _pieces(s, t):
    i = s.mesh.locate(t)
    k = s.mesh.knots
    h = k[i + 1] - k[i]
    tau = (np.asarray(t, dtype=float) - k[i]) / h
    return i, h, tau


def spline_eval(s: HermiteSpline, t):
    """Evaluate the spline at scalar ``t`` (shape (n,)) or array ``t`` (shape (len(t), n))."""
    i, h, tau = _pieces(s, t)
    a0, a1, b0, b1 = (np.asarray(v)[..., None] for v in basis(tau))
    h = np.asarray(h)[..., None]
    return (
        a0 * s.values[i]
        + h * a1 * s.derivs[i]
        + b0 * s.values[i + 1]
        + h * b1 * s.derivs[i + 1]
    )


def spline_deriv_eval(s: HermiteSpline, t):
    """First derivative of the spline; same shapes as :func:`spline_eval`."""
    i, h, tau = _pieces(s, t)
    da0, da1, db0, db1 = (np.asarray(v)[..., None] for v in basis_deriv(tau))
    h = np.asarray(h)[..., None]
    return (
        da0 / h * s.values[i]
        + da1 * s.derivs[i]
        + db0 / h * s.values[i + 1]
        + db1 * s.derivs[i + 1]
    )

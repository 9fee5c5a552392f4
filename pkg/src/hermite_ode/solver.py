"""Conjugate gradient for the reduced normal equations, plus a dense oracle."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .banded import SymmetricBandedMatrix

__all__ = [
    "Preconditioner",
    "CgConfig",
    "CgStats",
    "CgBreakdownError",
    "NotPositiveDefiniteError",
    "banded_matvec",
    "conjugate_gradient",
    "direct_solve",
]


class Preconditioner(enum.Enum):
    NONE = "none"
    JACOBI = "jacobi"


class CgBreakdownError(ArithmeticError):
    """Non-finite values or a non-positive curvature p^T F p during CG."""


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class CgConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_iter: int | None = None  # None means 10 * N
    preconditioner: Preconditioner = Preconditioner.JACOBI

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("CG tolerances must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        object.__setattr__(self, "preconditioner", Preconditioner(self.preconditioner))


@dataclass
class CgStats:
    iterations: int
    final_residual_norm: float
    converged: bool
    residual_history: list[float] = field(default_factory=list)


def banded_matvec(f: SymmetricBandedMatrix, v) -> np.ndarray:
    return f.matvec(v)


def _operator(f):
    if isinstance(f, SymmetricBandedMatrix):
        return f.matvec, f.diagonal(), f.size
    dense = np.asarray(f, dtype=float)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ValueError(f"matrix must be square, got shape {dense.shape}")
    return dense.__matmul__, np.diag(dense).copy(), dense.shape[0]


def conjugate_gradient(f, b, x0=None, cfg: CgConfig | None = None):
    """Solve ``F y = b`` for symmetric positive definite ``F``.

    Parameters
    ----------
    f : SymmetricBandedMatrix or ndarray
        System matrix.
    b : ndarray
        Right-hand side.
    x0 : ndarray, optional
        Initial iterate, e.g. another solver's solution. Defaults to zero.
    cfg : CgConfig, optional

    Returns
    -------
    y : ndarray
    stats : CgStats
        ``converged`` is False when ``max_iter`` ran out; that is not an error.

    Notes
    -----
    Stops once the true residual ``||b - F y||`` is at most
    ``max(rel_tol * ||b||, abs_tol)``. When the recursively updated residual
    first meets the test the true residual is recomputed; if it fails the test
    the iteration restarts from it.
    """
    cfg = cfg or CgConfig()
    matvec, diag, size = _operator(f)
    b = np.asarray(b, dtype=float)
    if b.shape != (size,):
        raise ValueError(f"right-hand side of shape {b.shape} does not match size {size}")
    max_iter = cfg.max_iter if cfg.max_iter is not None else 10 * size

    if cfg.preconditioner is Preconditioner.JACOBI:
        if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
            raise CgBreakdownError("Jacobi preconditioner needs a positive diagonal")
        inv_diag = 1.0 / diag
    else:
        inv_diag = None

    y = np.zeros(size) if x0 is None else np.array(x0, dtype=float)
    if y.shape != (size,):
        raise ValueError(f"initial guess of shape {y.shape} does not match size {size}")
    tol = max(cfg.rel_tol * float(np.linalg.norm(b)), cfg.abs_tol)

    r = b - matvec(y)
    rnorm = float(np.linalg.norm(r))
    history = [rnorm]
    if not math.isfinite(rnorm):
        raise CgBreakdownError("non-finite initial residual")
    if rnorm <= tol:
        return y, CgStats(0, rnorm, True, history)

    z = r * inv_diag if inv_diag is not None else r.copy()
    p = z.copy()
    rz = float(r @ z)
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        Fp = matvec(p)
        curvature = float(p @ Fp)
        if not math.isfinite(curvature) or curvature <= 0.0:
            raise CgBreakdownError(
                f"p^T F p = {curvature!r} at iteration {it}; matrix is not positive definite"
            )
        alpha = rz / curvature
        y += alpha * p
        r -= alpha * Fp
        rnorm = float(np.linalg.norm(r))
        if not math.isfinite(rnorm):
            raise CgBreakdownError(f"non-finite residual at iteration {it}")
        if rnorm <= tol:
            r = b - matvec(y)
            rnorm = float(np.linalg.norm(r))
            history.append(rnorm)
            if rnorm <= tol:
                converged = True
                break
            z = r * inv_diag if inv_diag is not None else r.copy()
            p = z.copy()
            rz = float(r @ z)
            continue
        history.append(rnorm)
        z = r * inv_diag if inv_diag is not None else r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new

    if not converged:
        # report the true residual, not the recurrence
        rnorm = float(np.linalg.norm(b - matvec(y)))
        history[-1] = rnorm
    return y, CgStats(it, rnorm, converged, history)


def direct_solve(f, b) -> np.ndarray:
    """Dense Cholesky solve, used to validate CG on small systems."""
    dense = f.to_dense() if isinstance(f, SymmetricBandedMatrix) else np.asarray(f, dtype=float)
    try:
        factor = scipy.linalg.cho_factor(dense, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"Cholesky factorization failed: {exc}") from None
    return scipy.linalg.cho_solve(factor, np.asarray(b, dtype=float))

"""Gauss-Legendre rules on the reference interval [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["QuadRule", "gauss_legendre"]


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Nodes in (0, 1) with positive weights summing to 1."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, f, a: float, b: float):
        """Approximate the integral of ``f`` over ``[a, b]``; ``f`` takes scalar t."""
        h = b - a
        return h * sum(w * f(a + x * h) for x, w in zip(self.nodes, self.weights))


@lru_cache(maxsize=None)
def gauss_legendre(order: int = 8) -> QuadRule:
    """``order``-point rule, exact for polynomials of degree <= 2*order - 1."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = np.polynomial.legendre.leggauss(order)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadRule(nodes, weights)

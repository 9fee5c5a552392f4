from fractions import Fraction

import numpy as np
import pytest

from hermite_ode.quadrature import gauss_legendre


@pytest.mark.parametrize("g", range(1, 11))
def test_weights_and_nodes(g):
    rule = gauss_legendre(g)
    assert rule.order == g
    assert np.all((rule.nodes > 0) & (rule.nodes < 1))
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("g", range(1, 11))
def test_polynomial_exactness(g):
    rule = gauss_legendre(g)
    for degree in range(2 * g):
        exact = Fraction(1, degree + 1)  # integral of tau^degree over [0, 1]
        approx = float(rule.weights @ rule.nodes**degree)
        assert approx == pytest.approx(float(exact), rel=1e-13), degree


def test_not_exact_beyond_degree():
    rule = gauss_legendre(3)
    assert abs(float(rule.weights @ rule.nodes**6) - 1 / 7) > 1e-6


def test_integrate_interval():
    rule = gauss_legendre(8)
    assert rule.integrate(np.sin, 0.0, np.pi) == pytest.approx(2.0, rel=1e-12)


def test_invalid_order():
    with pytest.raises(ValueError):
        gauss_legendre(0)

import numpy as np
import pytest

from hermite_ode.model import BoundaryConditions, Constraint, Endpoint, LinearOdeSystem
from hermite_ode.spline import Mesh

RC_A = np.array([[-2.0, 1.0], [1.0, -1.0]])


def rc_ladder():
    return LinearOdeSystem.from_entries([["-2", "1"], ["1", "-1"]], ["2*sin(2*t)", "0"], (0.0, 2.0))


def rc_ivp_bcs():
    return BoundaryConditions.initial([0.0, 0.0])


def rc_bvp_bcs():
    return BoundaryConditions(
        (Constraint(Endpoint.LEFT, 0, 0.0), Constraint(Endpoint.RIGHT, 1, 1.0))
    )


@pytest.fixture
def rc_system():
    return rc_ladder()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ivp_mesh():
    return Mesh.uniform(0.0, 2.0, 13)


@pytest.fixture
def bvp_mesh():
    return Mesh.uniform(0.0, 2.0, 10)

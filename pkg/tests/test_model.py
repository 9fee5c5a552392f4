import numpy as np
import pytest

from hermite_ode.expression import EvaluationError
from hermite_ode.model import (
    BoundaryConditionError,
    BoundaryConditions,
    Constraint,
    Endpoint,
    LinearOdeSystem,
    TimeMatrix,
    eval_system,
)

from conftest import RC_A


@pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 2.0])
def test_rc_ladder_evaluation(rc_system, t):
    A, q = eval_system(rc_system, t)
    np.testing.assert_array_equal(A, RC_A)
    np.testing.assert_allclose(q, [2 * np.sin(2 * t), 0.0], rtol=1e-15, atol=0)
    assert rc_system.constant_a


def test_zero_system():
    sys = LinearOdeSystem.from_entries([[0, 0], [0, 0]], [0, 0], (0, 1))
    A, q = eval_system(sys, 0.5)
    assert not A.any() and not q.any()


def test_constant_entries_ignore_t():
    sys = LinearOdeSystem.from_entries([["0", "1"], ["-1", "0"]], ["0", "0"], (0, 5))
    A, _ = eval_system(sys, 3.0)
    np.testing.assert_array_equal(A, [[0, 1], [-1, 0]])


def test_time_varying_not_constant():
    m = TimeMatrix([["-2*t"]])
    assert not m.is_constant
    assert m(1.5)[0, 0] == -3.0


def test_returned_matrix_is_a_copy(rc_system):
    rc_system.A(0.0)[0, 0] = 99.0
    assert rc_system.A(0.0)[0, 0] == -2.0


def test_eval_outside_interval(rc_system):
    with pytest.raises(ValueError, match="outside"):
        eval_system(rc_system, 2.5)


def test_evaluation_error_names_entry():
    sys = LinearOdeSystem.from_entries([["1/(t-1)"]], ["0"], (0, 2))
    with pytest.raises(EvaluationError, match=r"A\[1,1\].*t=1\.0"):
        sys.A(1.0)
    sys = LinearOdeSystem.from_entries([["0"]], ["1/(2*t-1)"], (0, 2))
    with pytest.raises(EvaluationError, match=r"q\[1\].*t=0\.5"):
        sys.q(0.5)


@pytest.mark.parametrize(
    "a, q, interval",
    [
        ([["1", "2"]], ["0"], (0, 1)),
        ([["1"]], ["0", "1"], (0, 1)),
        ([["1"]], ["0"], (1, 1)),
    ],
)
def test_invalid_systems(a, q, interval):
    with pytest.raises(ValueError):
        LinearOdeSystem.from_entries(a, q, interval)


def test_boundary_conditions():
    ivp = BoundaryConditions.initial([1.0, 2.0])
    assert ivp.is_initial_value(2)
    np.testing.assert_array_equal(ivp.initial_state(2), [1.0, 2.0])
    bvp = BoundaryConditions((Constraint(Endpoint.LEFT, 0, 0.0), Constraint(Endpoint.RIGHT, 1, 1.0)))
    assert not bvp.is_initial_value(2)
    with pytest.raises(BoundaryConditionError):
        bvp.initial_state(2)


def test_duplicate_constraint_rejected():
    with pytest.raises(BoundaryConditionError, match="duplicate"):
        BoundaryConditions((Constraint(Endpoint.LEFT, 0, 0.0), Constraint(Endpoint.LEFT, 0, 1.0)))


def test_constraint_count_and_range():
    with pytest.raises(BoundaryConditionError):
        BoundaryConditions(())
    bcs = BoundaryConditions.initial([0.0, 0.0, 0.0])
    with pytest.raises(BoundaryConditionError, match="exceed"):
        bcs.validate(1)
    with pytest.raises(BoundaryConditionError, match="out of range"):
        BoundaryConditions((Constraint(Endpoint.RIGHT, 2, 0.0),)).validate(2)

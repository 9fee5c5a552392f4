import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import hilbert

from hermite_ode.assembly import apply_boundary_conditions, assemble_global
from hermite_ode.banded import SymmetricBandedMatrix
from hermite_ode.solver import (
    CgBreakdownError,
    CgConfig,
    NotPositiveDefiniteError,
    Preconditioner,
    conjugate_gradient,
    direct_solve,
)
from hermite_ode.spline import Mesh

from conftest import rc_bvp_bcs, rc_ivp_bcs, rc_ladder


def rel_err(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def random_spd(rng, k, cond=10.0):
    Q, _ = np.linalg.qr(rng.normal(size=(k, k)))
    return Q @ np.diag(np.geomspace(1.0, cond, k)) @ Q.T


def test_identity_one_iteration(rng):
    b = rng.normal(size=7)
    y, stats = conjugate_gradient(np.eye(7), b)
    np.testing.assert_allclose(y, b, rtol=1e-15)
    assert stats.iterations == 1 and stats.converged


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1), st.sampled_from(list(Preconditioner)))
def test_finite_termination(k, seed, pre):
    rng = np.random.default_rng(seed)
    F = random_spd(rng, k)
    b = rng.normal(size=k)
    y, stats = conjugate_gradient(F, b, cfg=CgConfig(preconditioner=pre))
    assert stats.converged
    assert stats.iterations <= k + 5
    assert rel_err(y, direct_solve(F, b)) < 1e-9


def test_stopping_rule_and_history(rng):
    F = random_spd(rng, 30, cond=1e3)
    b = rng.normal(size=30)
    cfg = CgConfig(rel_tol=1e-10, abs_tol=1e-30)
    y, stats = conjugate_gradient(F, b, cfg=cfg)
    true_res = np.linalg.norm(b - F @ y)
    assert true_res <= 1e-10 * np.linalg.norm(b)
    assert stats.final_residual_norm == pytest.approx(true_res, rel=1e-12)
    assert stats.residual_history[-1] == stats.final_residual_norm
    assert len(stats.residual_history) == stats.iterations + 1


def test_hilbert_matches_direct():
    H = hilbert(4)
    b = np.ones(4)
    y, stats = conjugate_gradient(H, b)
    assert stats.converged
    np.testing.assert_allclose(y, direct_solve(H, b), rtol=1e-8)


def test_max_iter_is_reported_not_raised(rng):
    F = random_spd(rng, 50, cond=1e4)
    b = rng.normal(size=50)
    y, stats = conjugate_gradient(F, b, cfg=CgConfig(max_iter=3))
    assert not stats.converged and stats.iterations == 3
    assert stats.final_residual_norm == pytest.approx(np.linalg.norm(b - F @ y), rel=1e-12)


def test_warm_start_from_solution(rng):
    F = random_spd(rng, 20)
    b = rng.normal(size=20)
    exact = direct_solve(F, b)
    _, stats = conjugate_gradient(F, b, x0=exact)
    assert stats.iterations <= 1 and stats.converged


def test_indefinite_raises():
    F = np.diag([1.0, -1.0])
    with pytest.raises(CgBreakdownError):
        conjugate_gradient(F, np.array([1.0, 1.0]), cfg=CgConfig(preconditioner="none"))
    with pytest.raises(CgBreakdownError, match="positive diagonal"):
        conjugate_gradient(F, np.array([1.0, 1.0]))


def test_non_finite_raises():
    F = np.eye(2)
    with pytest.raises(CgBreakdownError):
        conjugate_gradient(F, np.array([np.nan, 1.0]))


def test_shape_checks():
    with pytest.raises(ValueError):
        conjugate_gradient(np.eye(3), np.ones(2))
    with pytest.raises(ValueError):
        conjugate_gradient(np.eye(3), np.ones(3), x0=np.ones(2))


def test_config_validation():
    with pytest.raises(ValueError):
        CgConfig(rel_tol=0)
    with pytest.raises(ValueError):
        CgConfig(max_iter=0)


def test_direct_solve_scalar():
    np.testing.assert_allclose(direct_solve(np.array([[4.0]]), np.array([8.0])), [2.0])


def test_direct_solve_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError):
        direct_solve(np.diag([1.0, 0.0, -2.0]), np.ones(3))


def _reduced(points, bcs):
    qf = assemble_global(rc_ladder(), Mesh.uniform(0.0, 2.0, points))
    return apply_boundary_conditions(qf, bcs)


@pytest.mark.parametrize("points, bcs", [(13, rc_ivp_bcs()), (10, rc_bvp_bcs()), (40, rc_ivp_bcs())])
def test_rc_ladder_cg_vs_direct(points, bcs):
    red = _reduced(points, bcs)
    y, stats = conjugate_gradient(red.f_red, red.b_red)
    assert stats.converged
    assert rel_err(y, direct_solve(red.f_red, red.b_red)) < 1e-9


def test_banded_matvec_rc_vs_dense(rng):
    red = _reduced(13, rc_ivp_bcs())
    v = rng.normal(size=red.size)
    ref = red.f_red.to_dense() @ v
    assert rel_err(red.f_red.matvec(v), ref) <= 1e-13


def test_preconditioner_invariance():
    red = _reduced(13, rc_ivp_bcs())
    y_j, _ = conjugate_gradient(red.f_red, red.b_red, cfg=CgConfig(preconditioner=Preconditioner.JACOBI))
    y_n, s_n = conjugate_gradient(red.f_red, red.b_red, cfg=CgConfig(preconditioner=Preconditioner.NONE))
    assert s_n.converged
    assert rel_err(y_j, y_n) < 1e-8


def test_banded_and_dense_inputs_agree():
    red = _reduced(10, rc_bvp_bcs())
    y_b, _ = conjugate_gradient(red.f_red, red.b_red)
    y_d, _ = conjugate_gradient(red.f_red.to_dense(), red.b_red)
    assert rel_err(y_b, y_d) < 1e-10


def test_determinism():
    red = _reduced(13, rc_ivp_bcs())
    y1, s1 = conjugate_gradient(red.f_red, red.b_red)
    y2, s2 = conjugate_gradient(red.f_red, red.b_red)
    assert y1.tobytes() == y2.tobytes()
    assert s1.residual_history == s2.residual_history


def test_banded_input_type():
    band = SymmetricBandedMatrix.from_dense(np.diag([2.0, 4.0]))
    y, _ = conjugate_gradient(band, np.array([2.0, 4.0]))
    np.testing.assert_allclose(y, [1.0, 1.0])

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from distnesterov.central import (
    MomentumSchedule, default_schedule, gradient_descent, nesterov, nesterov_step,
    solve_reference, strongly_convex_beta,
)
from distnesterov.errors import ConvergenceError, NumericalError, ParameterError
from distnesterov.objective import (
    QuadraticObjective, generate_logistic_data, huberized_quartic_prime, logistic_objective,
    quartic_objective,
)


def test_one_exact_step():
    y, x = nesterov_step(np.array([1.0]), np.array([1.0]), np.array([1.0]), 1.0, 0.0)
    assert y.tolist() == [0.0] and x.tolist() == [0.0]


def test_step_validation():
    with pytest.raises(ParameterError):
        nesterov_step(np.zeros(1), np.zeros(1), np.zeros(1), 0.0, 0.0)
    with pytest.raises(NumericalError):
        nesterov_step(np.array([np.nan]), np.zeros(1), np.zeros(1), 1.0, 0.0)


def test_zero_momentum_is_gradient_descent_bitwise():
    grad = lambda x: x ** 3 - 0.4
    a, b = [], []
    nesterov(grad, np.array([0.9]), 0.2, MomentumSchedule(), 300, lambda k, x: a.append(x.copy()))
    gradient_descent(grad, np.array([0.9]), 0.2, 300, lambda k, x: b.append(x.copy()))
    assert np.array_equal(np.array(a), np.array(b))


def test_convex_schedule_on_quadratic():
    x = nesterov(lambda x: x, np.array([1.0]), 1.0, MomentumSchedule.convex(), 50)
    assert abs(x[0]) <= 1e-12


def test_constant_schedule_geometric_gradient_decay():
    obj = QuadraticObjective(np.random.default_rng(0).standard_normal((4, 3)))
    norms = []
    nesterov(obj.global_gradient, np.full(3, 5.0), 0.5, MomentumSchedule.constant(0.3), 60,
             lambda k, x: norms.append(np.linalg.norm(obj.global_gradient(x))))
    assert norms[-1] <= 1e-10 * norms[0]


def test_schedule_values():
    conv = MomentumSchedule.convex()
    assert conv(0) == 0.0 and conv(1) == 0.25 and conv(9) == 0.75
    assert all(conv(k) < conv(k + 1) < 1 for k in range(100))
    assert MomentumSchedule.constant(0.4)(17) == 0.4
    assert MomentumSchedule().is_zero and not conv.is_zero


@pytest.mark.parametrize("beta", [-0.1, 1.0, 1.5])
def test_schedule_rejects_out_of_range(beta):
    with pytest.raises(ParameterError):
        MomentumSchedule.constant(beta)


def test_schedule_json_roundtrip():
    for m in (MomentumSchedule.convex(), MomentumSchedule.constant(0.7)):
        assert MomentumSchedule.from_json(m.to_json()) == m


def test_strongly_convex_beta_examples():
    assert strongly_convex_beta(2.0, 2.0) == 0.0
    assert strongly_convex_beta(1.0, 9.0) == 0.5
    b = strongly_convex_beta(1.0, 1e6)
    assert b == pytest.approx(0.998, abs=1e-3) and b < 1


@pytest.mark.parametrize("mu,L", [(0.0, 1.0), (-1.0, 1.0), (2.0, 1.0)])
def test_strongly_convex_beta_errors(mu, L):
    with pytest.raises(ParameterError):
        strongly_convex_beta(mu, L)


def test_default_schedule_by_class():
    assert default_schedule(quartic_objective(3)).kind == "convex"
    q = QuadraticObjective([[0.0]])
    assert default_schedule(q) == MomentumSchedule.constant(0.0)


def test_reference_quadratic():
    x, f = solve_reference(QuadraticObjective([[0.0], [2.0]]))
    assert abs(x[0] - 1.0) <= 1e-12 and f == pytest.approx(0.5)


def test_reference_quartic():
    obj = quartic_objective(30, seed=4)
    x, f = solve_reference(obj)
    assert abs(x[0]) <= 1e-6
    assert np.linalg.norm(obj.global_gradient(x)) <= 1e-13


def test_reference_logistic_unique():
    obj = logistic_objective(generate_logistic_data(10, 5, 5, seed=1))
    x1, _ = solve_reference(obj)
    x2, _ = solve_reference(obj, x0=np.full(obj.p, 3.0))
    assert np.max(np.abs(x1 - x2)) <= 1e-8
    assert np.linalg.norm(obj.global_gradient(x1)) <= 1e-13


def test_reference_reports_failure():
    obj = logistic_objective(generate_logistic_data(10, 5, 5, seed=1))
    with pytest.raises(ConvergenceError) as exc:
        solve_reference(obj, max_iters=3, x0=np.full(obj.p, 3.0))
    assert exc.value.grad_norm > 1e-13


@settings(max_examples=30, deadline=None)
@given(x0=st.floats(-3, 3), step=st.floats(0.01, 0.3), iters=st.integers(1, 100))
def test_callback_sees_every_iterate(x0, step, iters):
    ks = []
    nesterov(huberized_quartic_prime, np.array([x0]), step, MomentumSchedule.convex(), iters,
             lambda k, x: ks.append(k))
    assert ks == list(range(iters + 1))

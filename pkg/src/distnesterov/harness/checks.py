"""Invariant suite on small instances, run by ``distnesterov check``."""

import math

import numpy as np

from ..central import MomentumSchedule, gradient_descent, nesterov
from ..distributed import AlgoConfig, Algorithm, init_state, run, step, tracking_drift
from ..graph import generate_nearest_neighbor_digraph
from ..objective import QuadraticObjective, generate_logistic_data, logistic_objective, quartic_objective
from ..weights import (
    Kind, Side, StochasticMatrix, perron_vector, power_limit_residual, similarity_transform_check,
    uniform_column_stochastic, uniform_row_stochastic, validate,
)


def suite_radius(n):
    """Connection radius for the check suite: three times the RGG connectivity scale."""
    if n < 2:
        return 1.0
    return min(math.sqrt(2), 3.0 * math.sqrt(math.log(n) / (math.pi * n)))


def graph_suite(count=50, sizes=(5, 10, 30), seed=0):
    out = []
    for i in range(count):
        n = sizes[i % len(sizes)]
        out.append(generate_nearest_neighbor_digraph(n, suite_radius(n), seed + i))
    return out


def fd_gradient_error(obj, i, x, h=1e-6):
    """Relative error of ``grad f_i`` against central differences."""
    g = obj.gradient(i, x)
    fd = np.empty_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h
        fd[j] = (obj.value(i, x + e) - obj.value(i, x - e)) / (2 * h)
    return float(np.linalg.norm(fd - g) / max(np.linalg.norm(g), 1e-8))


def transformed_abn(A, B, v, obj, x0, step_size, schedule, iters):
    """ABN rewritten on ``s~ = V^{-1} s`` with exact ``V = diag(v)``.

    Returns the list of ``V s~_k`` for ``k = 0..iters``.
    """
    At = (B * v[None, :]) / v[:, None]
    x = np.array(x0, dtype=float)
    y = x.copy()
    g = obj.gradients(x)
    st = g / v[:, None]
    out = [v[:, None] * st]
    for k in range(iters):
        y_new = A @ x - step_size * (v[:, None] * st)
        x_new = y_new + schedule(k) * (y_new - y)
        g_new = obj.gradients(x_new)
        st = At @ st + (g_new - g) / v[:, None]
        x, y, g = x_new, y_new, g_new
        out.append(v[:, None] * st)
    return out


def _trajectory(cfg, obj, x0, iters):
    xs = []
    run(cfg, obj, x0, iters, lambda k, s: xs.append(s.x.copy()))
    return np.array(xs)


def check_stochasticity(graphs):
    for g in graphs:
        validate(uniform_row_stochastic(g), g)
        validate(uniform_column_stochastic(g), g)
    return True, f"{len(graphs)} graphs"


def check_perron(graphs):
    worst_limit = worst_fixed = 0.0
    for g in graphs:
        A, B = uniform_row_stochastic(g), uniform_column_stochastic(g)
        worst_limit = max(worst_limit, power_limit_residual(A, 500), power_limit_residual(B, 500))
        w = perron_vector(A, Side.LEFT)
        v = perron_vector(B, Side.RIGHT)
        worst_fixed = max(worst_fixed, np.max(np.abs(A.entries.T @ w - w)),
                          np.max(np.abs(B.entries @ v - v)))
        similarity_transform_check(B, perron_vector(B, Side.RIGHT, tol=1e-15))
    ok = worst_limit <= 1e-8 and worst_fixed <= 1e-10
    return ok, f"limit {worst_limit:.2e}, fixed point {worst_fixed:.2e}"


def check_conservation(seed=0, iters=500):
    g = generate_nearest_neighbor_digraph(10, 0.6, seed)
    obj = logistic_objective(generate_logistic_data(10, 4, 5, seed=seed))
    x0 = np.random.default_rng(seed).standard_normal((10, obj.p))
    A, B = uniform_row_stochastic(g), uniform_column_stochastic(g)
    worst = 0.0
    for algo, mom in (("AB", MomentumSchedule()), ("ABN", MomentumSchedule.constant(0.5))):
        cfg = AlgoConfig(algo, 0.5 / obj.L, A, B, mom)
        drifts = []

        def probe(k, s):
            scale = 1.0 + np.max(np.linalg.norm(s.grad, axis=1))
            drifts.append(tracking_drift(s) / scale)
        run(cfg, obj, x0, iters, probe)
        worst = max(worst, max(drifts))
    return worst <= 1e-9, f"max scaled drift {worst:.2e}"


def check_reductions(seed=0, iters=200):
    g = generate_nearest_neighbor_digraph(8, 0.5, seed)
    obj = logistic_objective(generate_logistic_data(8, 3, 4, seed=seed))
    x0 = np.random.default_rng(seed).standard_normal((8, obj.p))
    A, B = uniform_row_stochastic(g), uniform_column_stochastic(g)
    a = 0.5 / obj.L
    d1 = np.max(np.abs(_trajectory(AlgoConfig("ABN", a, A, B), obj, x0, iters)
                       - _trajectory(AlgoConfig("AB", a, A, B), obj, x0, iters)))
    d2 = np.max(np.abs(_trajectory(AlgoConfig("FROZEN", a, A, A), obj, x0, iters)
                       - _trajectory(AlgoConfig("FROST", a, A, A), obj, x0, iters)))
    worst = float(max(d1, d2))
    return worst <= 1e-14, f"max deviation {worst:.2e}"


def check_single_agent(iters=200):
    obj = quartic_objective(1, seed=0)
    one = StochasticMatrix([[1.0]], Kind.ROW)
    col = StochasticMatrix([[1.0]], Kind.COLUMN)
    x0 = np.array([[0.9]])
    a = 0.2
    worst = 0.0
    for mom in (MomentumSchedule.convex(), MomentumSchedule.constant(0.5), MomentumSchedule()):
        ref = []
        nesterov(lambda x: obj.gradient(0, x), x0[0], a, mom, iters, lambda k, x: ref.append(x.copy()))
        ref = np.array(ref[1:])
        for algo, second in (("ABN", col), ("FROZEN", one)):
            got = _trajectory(AlgoConfig(algo, a, one, second, mom), obj, x0, iters)[:, 0, :]
            worst = max(worst, float(np.max(np.abs(got - ref))))
    gd = []
    gradient_descent(lambda x: obj.gradient(0, x), x0[0], a, iters, lambda k, x: gd.append(x.copy()))
    got = _trajectory(AlgoConfig("AB", a, one, col), obj, x0, iters)[:, 0, :]
    worst = max(worst, float(np.max(np.abs(got - np.array(gd[1:])))))
    return worst <= 1e-14, f"max deviation {worst:.2e}"


def check_transformation(seed=0, iters=100):
    g = generate_nearest_neighbor_digraph(5, 0.7, seed)
    obj = QuadraticObjective(np.random.default_rng(seed).standard_normal((5, 2)))
    A, B = uniform_row_stochastic(g), uniform_column_stochastic(g)
    v = perron_vector(B, Side.RIGHT, tol=1e-15)
    x0 = np.random.default_rng(seed + 1).standard_normal((5, 2))
    mom = MomentumSchedule.constant(0.4)
    cfg = AlgoConfig("ABN", 0.3, A, B, mom)
    ss = [init_state(cfg, obj, x0).s]
    run(cfg, obj, x0, iters, lambda k, s: ss.append(s.s.copy()))
    ref = transformed_abn(A.entries, B.entries, v, obj, x0, 0.3, mom, iters)
    worst = float(max(np.max(np.abs(a - b)) for a, b in zip(ss, ref)))
    return worst <= 1e-10, f"max |s - V s~| = {worst:.2e}"


def check_eigen_learning(graphs):
    worst = 0.0
    for g in graphs:
        A = uniform_row_stochastic(g)
        pi = perron_vector(A, Side.LEFT, tol=1e-15)
        obj = QuadraticObjective(np.zeros((g.n, 1)))
        cfg = AlgoConfig("FROZEN", 0.1, A, A, MomentumSchedule.constant(0.3))
        state = init_state(cfg, obj, np.zeros((g.n, 1)))
        for _ in range(10 * g.n):
            state = step(state, cfg, obj)
        worst = max(worst, float(np.max(np.abs(state.v - pi[None, :]))))
    return worst <= 1e-8, f"max |v - 1 pi^T| = {worst:.2e}"


def check_gradients(points=20, seed=0):
    rng = np.random.default_rng(seed)
    lg = logistic_objective(generate_logistic_data(5, 10, 5, seed=seed))
    qt = quartic_objective(5, seed=seed)
    worst = 0.0
    for obj, scale in ((lg, 1.0), (qt, 1.5)):
        for _ in range(points):
            i = int(rng.integers(obj.n))
            worst = max(worst, fd_gradient_error(obj, i, scale * rng.standard_normal(obj.p)))
    return worst <= 1e-5, f"max relative error {worst:.2e}"


def run_checks(quick=False):
    """Yield ``(name, passed, detail)`` for each invariant."""
    graphs = graph_suite(12 if quick else 50)
    checks = [
        ("stochastic weights", lambda: check_stochasticity(graphs)),
        ("perron vectors", lambda: check_perron(graphs)),
        ("tracking conservation", lambda: check_conservation(iters=200 if quick else 2000)),
        ("zero-momentum reductions", check_reductions),
        ("single-agent collapse", check_single_agent),
        ("state transformation", check_transformation),
        ("eigenvector learning", lambda: check_eigen_learning(graphs)),
        ("finite-difference gradients", check_gradients),
    ]
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, bool(ok), detail

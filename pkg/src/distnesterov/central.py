"""Centralized reference methods: gradient descent and Nesterov's method."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConvergenceError, NumericalError, ParameterError


@dataclass(frozen=True)
class MomentumSchedule:
    """Momentum ``beta_k``: either a constant or ``k / (k + 3)``."""

    kind: str = "constant"
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "convex"):
            raise ParameterError(f"unknown momentum kind {self.kind!r}")
        if self.kind == "constant" and not (0.0 <= self.beta < 1.0):
            raise ParameterError(f"constant momentum must lie in [0, 1), got {self.beta}")

    @classmethod
    def constant(cls, beta):
        return cls("constant", float(beta))

    @classmethod
    def convex(cls):
        return cls("convex", 0.0)

    def __call__(self, k):
        if self.kind == "convex":
            return k / (k + 3.0)
        return self.beta

    @property
    def is_zero(self):
        return self.kind == "constant" and self.beta == 0.0

    def label(self):
        return "k/(k+3)" if self.kind == "convex" else repr(self.beta)

    def to_json(self):
        if self.kind == "convex":
            return {"kind": "convex"}
        return {"kind": "constant", "beta": self.beta}

    @classmethod
    def from_json(cls, obj):
        if obj.get("kind") == "convex":
            return cls.convex()
        return cls.constant(obj.get("beta", 0.0))


def strongly_convex_beta(mu, L):
    """``(sqrt(L) - sqrt(mu)) / (sqrt(L) + sqrt(mu))``."""
    if not (0 < mu <= L):
        raise ParameterError(f"need 0 < mu <= L, got mu={mu}, L={L}")
    rl, rm = math.sqrt(L), math.sqrt(mu)
    return (rl - rm) / (rl + rm)


def default_schedule(obj):
    """Class-appropriate schedule for an objective's ``(mu, L)`` metadata."""
    if obj.mu:
        return MomentumSchedule.constant(strongly_convex_beta(obj.mu, obj.L))
    return MomentumSchedule.convex()


def nesterov_step(x, y_prev, grad, step, beta):
    """One step of ``y+ = x - step*grad``, ``x+ = y+ + beta*(y+ - y_prev)``.

    Returns ``(y_next, x_next)``.
    """
    if not step > 0:
        raise ParameterError(f"step must be positive, got {step}")
    x, y_prev, grad = (np.asarray(a, dtype=float) for a in (x, y_prev, grad))
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y_prev)) and np.all(np.isfinite(grad))):
        raise NumericalError("non-finite input to nesterov_step")
    y_next = x - step * grad
    x_next = y_next + beta * (y_next - y_prev)
    return y_next, x_next


def nesterov(grad_fn, x0, step, schedule, iters, callback=None):
    """Run Nesterov's method from ``x0 = y0``; returns the final ``x``.

    ``callback(k, x)`` is invoked for ``k = 0..iters``.
    """
    x = np.array(x0, dtype=float)
    y = x.copy()
    if callback is not None:
        callback(0, x)
    for k in range(iters):
        y, x = nesterov_step(x, y, grad_fn(x), step, schedule(k))
        if callback is not None:
            callback(k + 1, x)
    return x


def gradient_descent(grad_fn, x0, step, iters, callback=None):
    x = np.array(x0, dtype=float)
    if callback is not None:
        callback(0, x)
    for k in range(iters):
        x = x - step * grad_fn(x)
        if not np.all(np.isfinite(x)):
            raise NumericalError(f"gradient descent diverged at k={k + 1}")
        if callback is not None:
            callback(k + 1, x)
    return x


def solve_reference(obj, tol=1e-13, max_iters=200_000, x0=None):
    """High-accuracy minimizer of ``F`` for residual computations.

    Runs Nesterov's method with step ``1/L`` and the class-appropriate
    momentum until ``||grad F|| <= tol``. When the objective knows its
    minimizer in closed form the iteration starts there.

    Returns ``(x_star, f_star)``; raises :class:`ConvergenceError` carrying the
    last gradient norm if ``max_iters`` is exhausted.
    """
    if obj.L is None:
        raise ParameterError("solve_reference needs a smoothness constant L")
    exact = obj.exact_minimizer()
    if x0 is None:
        x0 = exact if exact is not None and np.all(np.isfinite(exact)) else np.zeros(obj.p)
    schedule = default_schedule(obj)
    step = 1.0 / obj.L
    x = np.array(x0, dtype=float)
    y = x.copy()
    g = obj.global_gradient(x)
    gnorm = float(np.linalg.norm(g))
    for k in range(max_iters):
        if gnorm <= tol:
            return x, obj.global_value(x)
        y, x = nesterov_step(x, y, g, step, schedule(k))
        g = obj.global_gradient(x)
        gnorm = float(np.linalg.norm(g))
    if gnorm <= tol:
        return x, obj.global_value(x)
    raise ConvergenceError(
        f"reference solve stopped after {max_iters} iterations with ||grad F|| = {gnorm:.3e}",
        grad_norm=gnorm)

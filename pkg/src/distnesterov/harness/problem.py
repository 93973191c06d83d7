"""A fully built experiment instance: graph, weights, objective, start and optimum."""

from dataclasses import dataclass

import numpy as np

from ..central import MomentumSchedule, default_schedule, nesterov_step, solve_reference
from ..distributed import AlgoConfig, Algorithm, run
from ..weights import Side, perron_vector, uniform_column_stochastic, uniform_row_stochastic
from .trace import TraceRecorder


@dataclass(frozen=True, eq=False)
class Problem:
    graph: object
    obj: object
    x0: np.ndarray
    x_star: np.ndarray
    f_star: float
    A: object
    B: object
    A_tilde: object
    pi: np.ndarray

    @classmethod
    def build(cls, graph, obj, x0, x_star=None, f_star=None, A_tilde=None):
        """Uniform weights on ``graph``; ``A~ = A`` unless given."""
        A = uniform_row_stochastic(graph)
        B = uniform_column_stochastic(graph)
        At = A if A_tilde is None else A_tilde
        if x_star is None:
            x_star, f_star = solve_reference(obj)
        elif f_star is None:
            f_star = obj.global_value(x_star)
        pi = perron_vector(At, Side.LEFT, tol=1e-15)
        return cls(graph, obj, np.asarray(x0, dtype=float), np.asarray(x_star, dtype=float),
                   float(f_star), A, B, At, pi)

    @property
    def n(self):
        return self.graph.n

    def config(self, algorithm, step, momentum=None):
        algorithm = Algorithm(algorithm)
        if not algorithm.accelerated:
            momentum = MomentumSchedule()
        elif momentum is None:
            momentum = default_schedule(self.obj)
        second = self.A_tilde if algorithm.row_only else self.B
        return AlgoConfig(algorithm, step, self.A, second, momentum)

    def recorder(self, label, **kwargs):
        return TraceRecorder(label, self.obj, self.x_star, self.f_star, pi=self.pi, **kwargs)

    def run(self, algorithm, step, momentum, iters, label=None, **recorder_kwargs):
        """Run one algorithm; the trace includes the initial point at ``k = 0``."""
        cfg = self.config(algorithm, step, momentum)
        rec = self.recorder(label or cfg.algorithm.value, **recorder_kwargs)
        if rec.record(0, self.x0, 0.0):
            run(cfg, self.obj, self.x0, iters, rec)
        return rec

    def run_central(self, iters, step=None, momentum=None, label="Nesterov", **recorder_kwargs):
        """Centralized Nesterov from the agents' average start, defaulting to step ``1/L``.

        Every agent is credited with the central iterate, so the residual is
        ``||x_k - x*||``.
        """
        step = 1.0 / self.obj.L if step is None else step
        momentum = default_schedule(self.obj) if momentum is None else momentum
        rec = self.recorder(label, **recorder_kwargs)
        x = self.x0.mean(axis=0)
        y = x.copy()
        if rec.record(0, np.tile(x, (self.n, 1))) is False:
            return rec
        for k in range(int(iters)):
            y, x = nesterov_step(x, y, self.obj.global_gradient(x), step, momentum(k))
            if rec.record(k + 1, np.tile(x, (self.n, 1))) is False:
                break
        return rec

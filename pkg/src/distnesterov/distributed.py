"""Synchronous simulation of AB, ABN, FROST and FROZEN.

Every agent's state is one row of an ``n x p`` array, and each communication
round is one dense matrix product. Weight matrices:

* AB / ABN: ``A`` row-stochastic for the estimates, ``B`` column-stochastic
  for the gradient trackers.
* FROST / FROZEN: ``A`` and a second row-stochastic ``A~`` for the trackers
  and the eigenvector estimates; only row-stochastic weights are needed.
"""

from dataclasses import dataclass, replace
import enum

import numpy as np

from .central import MomentumSchedule
from .errors import DistNesterovError, DivergenceError, NumericalError, ParameterError, StructuralInputError
from .weights import Kind, StochasticMatrix

DIVERGENCE_BOUND = 1e100

# Tracker updates subtract the old gradient before adding the new one: for a
# single agent (mixing weight exactly 1) this makes s equal the gradient bit
# for bit, so the run reproduces the centralized method exactly.


class Algorithm(enum.Enum):
    AB = "AB"
    ABN = "ABN"
    FROST = "FROST"
    FROZEN = "FROZEN"

    @property
    def row_only(self):
        return self in (Algorithm.FROST, Algorithm.FROZEN)

    @property
    def accelerated(self):
        return self in (Algorithm.ABN, Algorithm.FROZEN)


@dataclass
class AlgoState:
    x: np.ndarray
    s: np.ndarray
    grad: np.ndarray
    y: np.ndarray = None
    v: np.ndarray = None
    k: int = 0

    def copy(self):
        return AlgoState(**{f: (a.copy() if isinstance(a, np.ndarray) else a)
                            for f, a in self.__dict__.items()})


@dataclass(frozen=True, eq=False)
class AlgoConfig:
    """Algorithm, step ``alpha``, momentum schedule and weights.

    ``B`` is column-stochastic for AB/ABN and row-stochastic (``A~``) for
    FROST/FROZEN. AB and FROST accept only the zero schedule.
    """

    algorithm: Algorithm
    step: float
    A: StochasticMatrix
    B: StochasticMatrix
    momentum: MomentumSchedule = MomentumSchedule()

    def __post_init__(self):
        algo = Algorithm(self.algorithm)
        object.__setattr__(self, "algorithm", algo)
        if not self.step > 0:
            raise ParameterError(f"step must be positive, got {self.step}")
        if self.A.kind is not Kind.ROW:
            raise StructuralInputError("A must be row-stochastic")
        want = Kind.ROW if algo.row_only else Kind.COLUMN
        if self.B.kind is not want:
            raise StructuralInputError(f"{algo.value} needs a {want.value}-stochastic second matrix")
        if self.A.n != self.B.n:
            raise StructuralInputError(f"weight sizes differ: {self.A.n} vs {self.B.n}")
        if not algo.accelerated and not self.momentum.is_zero:
            raise ParameterError(f"{algo.value} has no momentum; got schedule {self.momentum}")

    @property
    def n(self):
        return self.A.n


def init_state(cfg, obj, x0):
    """``y0 = x0``, ``s0 = grad f(x0)`` and, for FROST/FROZEN, ``v0 = I``."""
    x0 = np.array(x0, dtype=float)
    if x0.ndim == 1:
        x0 = np.tile(x0, (cfg.n, 1))
    if x0.shape != (cfg.n, obj.p) or obj.n != cfg.n:
        raise StructuralInputError(
            f"x0 shape {x0.shape} incompatible with n={cfg.n} agents and p={obj.p}")
    grad = obj.gradients(x0)
    state = AlgoState(x=x0, s=grad.copy(), grad=grad)
    if cfg.algorithm.accelerated:
        state.y = x0.copy()
    if cfg.algorithm.row_only:
        state.v = np.eye(cfg.n)
    return state


def _check(x, k):
    if not np.all(np.isfinite(x)):
        raise DivergenceError(f"non-finite iterate at k={k}", k=k, magnitude=np.inf)
    mag = float(np.max(np.abs(x)))
    if mag > DIVERGENCE_BOUND:
        raise DivergenceError(f"iterates blew up at k={k} (max |x| = {mag:.3e})", k=k, magnitude=mag)


def _eigen_diag(v, k):
    d = np.diag(v).copy()
    if np.any(d <= np.finfo(float).tiny):
        raise NumericalError(f"eigenvector estimate diagonal underflowed at k={k}")
    return d[:, None]


def ab_step(state, cfg, obj):
    """``x+ = A x - alpha s``; ``s+ = B s + grad f(x+) - grad f(x)``."""
    A, B = cfg.A.entries, cfg.B.entries
    x = A @ state.x - cfg.step * state.s
    _check(x, state.k + 1)
    grad = obj.gradients(x)
    s = B @ state.s - state.grad + grad
    return AlgoState(x=x, s=s, grad=grad, k=state.k + 1)


def abn_step(state, cfg, obj):
    """AB with Nesterov extrapolation on the estimates.

    ``y+ = A x - alpha s``, ``x+ = y+ + beta_k (y+ - y)``,
    ``s+ = B s + grad f(x+) - grad f(x)``.
    """
    A, B = cfg.A.entries, cfg.B.entries
    beta = cfg.momentum(state.k)
    y = A @ state.x - cfg.step * state.s
    x = y + beta * (y - state.y)
    _check(x, state.k + 1)
    grad = obj.gradients(x)
    s = B @ state.s - state.grad + grad
    return AlgoState(x=x, y=y, s=s, grad=grad, k=state.k + 1)


def frost_step(state, cfg, obj):
    """Row-stochastic gradient tracking with eigenvector learning, no momentum."""
    A, At = cfg.A.entries, cfg.B.entries
    v = At @ state.v
    x = A @ state.x - cfg.step * state.s
    _check(x, state.k + 1)
    grad = obj.gradients(x)
    s = At @ state.s - state.grad / _eigen_diag(state.v, state.k) + grad / _eigen_diag(v, state.k + 1)
    return AlgoState(x=x, s=s, grad=grad, v=v, k=state.k + 1)


def frozen_step(state, cfg, obj):
    """FROST plus Nesterov extrapolation.

    ``v+ = A~ v``; ``y+ = A x - alpha s``; ``x+ = y+ + beta_k (y+ - y)``;
    ``s+ = A~ s + grad f(x+) / diag(v+) - grad f(x) / diag(v)``, each agent
    dividing by its own entry ``[v_i]_i``.
    """
    A, At = cfg.A.entries, cfg.B.entries
    beta = cfg.momentum(state.k)
    v = At @ state.v
    y = A @ state.x - cfg.step * state.s
    x = y + beta * (y - state.y)
    _check(x, state.k + 1)
    grad = obj.gradients(x)
    s = At @ state.s - state.grad / _eigen_diag(state.v, state.k) + grad / _eigen_diag(v, state.k + 1)
    return AlgoState(x=x, y=y, s=s, grad=grad, v=v, k=state.k + 1)


STEPS = {
    Algorithm.AB: ab_step,
    Algorithm.ABN: abn_step,
    Algorithm.FROST: frost_step,
    Algorithm.FROZEN: frozen_step,
}


def step(state, cfg, obj):
    return STEPS[cfg.algorithm](state, cfg, obj)


def run(cfg, obj, x0, iters, probe=None, state=None):
    """Run ``iters`` rounds; ``probe(k, state)`` is called after each one.

    Returns the final :class:`AlgoState`. Errors raised by a step get an
    ``iteration`` attribute naming the round that failed.
    """
    if state is None:
        state = init_state(cfg, obj, x0)
    stepper = STEPS[cfg.algorithm]
    for _ in range(int(iters)):
        try:
            state = stepper(state, cfg, obj)
        except DistNesterovError as exc:
            exc.iteration = state.k + 1
            raise
        if probe is not None:
            if probe(state.k, state) is False:
                break
    return state


def with_momentum(cfg, momentum):
    return replace(cfg, momentum=momentum)


def tracking_drift(state, pi=None):
    """Deviation of the trackers from their conserved quantity.

    AB/ABN: ``||sum_i s_i - sum_i grad f_i(x_i)||``, exactly zero in exact
    arithmetic since ``1^T B = 1^T``. FROST/FROZEN: with ``pi`` the left
    Perron vector of ``A~``, ``||pi^T (s - grad / diag(v))||`` is conserved
    at zero instead.
    """
    if state.v is None:
        return float(np.linalg.norm(state.s.sum(axis=0) - state.grad.sum(axis=0)))
    if pi is None:
        raise ParameterError("row-stochastic drift needs the Perron vector of A~")
    scaled = state.grad / np.diag(state.v)[:, None]
    return float(np.linalg.norm(pi @ (state.s - scaled)))

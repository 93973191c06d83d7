"""Grid search over step size and momentum, scored by iterations to a target."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import math

from ..central import MomentumSchedule, strongly_convex_beta
from ..distributed import Algorithm
from ..errors import DivergenceError, NumericalError, TuningError

DEFAULT_STEP_EXPONENTS = tuple(range(-10, 1))
DEFAULT_BETAS = (0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class Candidate:
    step: float
    momentum: MomentumSchedule = MomentumSchedule()

    def sort_key(self):
        # preference on ties: larger step, then smaller momentum
        m = self.momentum
        return (-self.step, (1, 0.0) if m.kind == "convex" else (0, m.beta))


@dataclass
class CandidateResult:
    candidate: Candidate
    status: str  # reached | missed | diverged | pruned
    iters: int = None
    final: float = math.nan


@dataclass
class TuneResult:
    algorithm: Algorithm
    step: float
    momentum: MomentumSchedule
    iters_to_target: int
    results: list = field(default_factory=list)


def default_grid(algorithm, obj, step_exponents=DEFAULT_STEP_EXPONENTS, betas=None):
    """Steps ``2^e / L``; momenta per the objective class.

    Non-accelerated methods get ``beta = 0`` only. Accelerated methods get
    ``betas`` plus the strongly convex optimum for ``mu > 0``, or the
    ``k/(k+3)`` schedule for ``mu = 0``.
    """
    algorithm = Algorithm(algorithm)
    steps = [2.0 ** e / obj.L for e in step_exponents]
    if not algorithm.accelerated:
        momenta = [MomentumSchedule()]
    elif obj.mu:
        bs = list(DEFAULT_BETAS if betas is None else betas)
        bs.append(strongly_convex_beta(obj.mu, obj.L))
        momenta = [MomentumSchedule.constant(b) for b in sorted(set(bs))]
    else:
        momenta = [MomentumSchedule.convex()] if betas is None else \
            [MomentumSchedule.constant(b) for b in betas]
    return [Candidate(a, m) for a in steps for m in momenta]


def evaluate(problem, algorithm, cand, target, max_iters, metric="residual", hold=0):
    """Run one candidate until it reaches ``target``, diverges, or gives up.

    Reaching means ``metric <= target`` at some ``k <= max_iters`` and for the
    ``hold`` iterations after it, so transient dips do not count.
    """
    kwargs = {"abort_above": 1e8 * (1.0 + _initial(problem)),
              "stop_below": target, "stop_metric": metric, "stop_hold": hold}
    try:
        rec = problem.run(algorithm, cand.step, cand.momentum, max_iters + hold, **kwargs)
    except (DivergenceError, NumericalError):
        return CandidateResult(cand, "diverged")
    if rec.aborted:
        return CandidateResult(cand, "diverged")
    final = getattr(rec.trace.records[-1], metric)
    if rec.hit is None or rec.hit > max_iters:
        return CandidateResult(cand, "missed", None, final)
    return CandidateResult(cand, "reached", rec.hit, final)


def _initial(problem):
    from .trace import residual
    return residual(problem.x0, problem.x_star)


def _evaluate_star(args):
    return evaluate(*args)


def tune(problem, algorithm, grid=None, target=1e-8, max_iters=10_000, metric="residual",
         prune=True, workers=1, hold=0):
    """Pick the candidate reaching ``target`` in the fewest iterations.

    ``hold`` is passed to :func:`evaluate`.

    Candidates are visited in tie-break order (larger step, then smaller
    momentum), so with ``prune`` each later run is capped just below the
    best count found so far without changing the winner. ``workers > 1``
    evaluates every candidate in a process pool instead; results are keyed
    by candidate, so the outcome does not depend on completion order.
    """
    algorithm = Algorithm(algorithm)
    if grid is None:
        grid = default_grid(algorithm, problem.obj)
    grid = sorted(grid, key=Candidate.sort_key)
    if not grid:
        raise TuningError("empty tuning grid", grid=[])

    results = {}
    if workers > 1:
        jobs = [(problem, algorithm, c, target, max_iters, metric, hold) for c in grid]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cand, res in zip(grid, pool.map(_evaluate_star, jobs)):
                results[cand] = res
    else:
        best = None
        for cand in grid:
            cap = max_iters if (best is None or not prune) else best - 1
            if cap < 0:
                results[cand] = CandidateResult(cand, "pruned")
                continue
            res = evaluate(problem, algorithm, cand, target, cap, metric, hold)
            if prune and best is not None and res.status == "missed":
                res.status = "pruned"
            results[cand] = res
            if res.status == "reached" and (best is None or res.iters < best):
                best = res.iters

    ordered = [results[c] for c in grid]
    winners = [r for r in ordered if r.status == "reached"]
    if not winners:
        raise TuningError(
            f"{algorithm.value}: no candidate reached {metric} <= {target:g} within {max_iters} "
            f"iterations; grid: " + ", ".join(f"({c.step:.3g}, {c.momentum.label()})" for c in grid),
            grid=grid, results=ordered)
    win = min(winners, key=lambda r: r.iters)  # min() keeps the first, i.e. preferred, on ties
    return TuneResult(algorithm, win.candidate.step, win.candidate.momentum, win.iters, ordered)

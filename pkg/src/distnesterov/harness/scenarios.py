"""Scenario construction and execution for the benchmark experiments."""

from dataclasses import dataclass, field
import json
import logging
import os

import numpy as np

from ..central import MomentumSchedule
from ..distributed import Algorithm
from ..errors import ConfigError, DistNesterovError, OutputError
from ..graph import Digraph, generate_nearest_neighbor_digraph, is_strongly_connected
from ..objective import (
    LogisticData, LogisticObjective, QuadraticObjective, QuarticObjective,
    generate_logistic_data, quadratic_objective, quartic_objective,
)
from ..rng import component_rng, derive_seed
from .problem import Problem
from .svg import emit_svg
from .trace import emit_csv
from .tuning import Candidate, default_grid, tune

log = logging.getLogger(__name__)


def build_objective(cfg, n):
    spec = cfg.objective
    kind = spec.get("kind", "logistic")
    if kind == "logistic":
        if "data" in spec:
            data = LogisticData.from_json(spec["data"])
        else:
            data = generate_logistic_data(n, spec.get("p", 10), spec.get("m_per_agent", 5),
                                          spec.get("lam", 1e-2), seed=derive_seed(cfg.seed, "data"))
        obj = LogisticObjective(data)
    elif kind == "quartic":
        obj = QuarticObjective(spec["offsets"]) if "offsets" in spec else \
            quartic_objective(n, seed=derive_seed(cfg.seed, "objective"))
    elif kind == "quadratic":
        obj = QuadraticObjective(spec["targets"]) if "targets" in spec else \
            quadratic_objective(n, spec.get("p", 1), seed=derive_seed(cfg.seed, "objective"))
    else:
        raise ConfigError(f"unknown objective kind {kind!r}")
    if obj.n != n:
        raise ConfigError(f"objective has {obj.n} agents but the graph has {n} nodes")
    return obj


def build_graphs(cfg):
    """``[(radius or None, Digraph)]``: one graph, or one per study radius."""
    g = cfg.graph
    if "digraph" in g:
        graph = Digraph.from_json(g["digraph"])
        if not is_strongly_connected(graph):
            raise ConfigError("embedded digraph is not strongly connected")
        return [(None, graph)]
    radii = g.get("radii") if cfg.scenario == "sparsity_study" else None
    radii = radii or [g.get("radius", 0.45)]
    # one seed for every radius: the generator's draws do not depend on the
    # radius, so larger radii give supergraphs of the smaller ones
    seed = derive_seed(cfg.seed, "graph")
    return [(r, generate_nearest_neighbor_digraph(g["n"], r, seed)) for r in radii]


def initial_point(cfg, n, p):
    if cfg.x0 == "zeros":
        return np.zeros((n, p))
    return component_rng(cfg.seed, "init").standard_normal((n, p))


def build_problems(cfg):
    graphs = build_graphs(cfg)
    n = graphs[0][1].n
    obj = build_objective(cfg, n)
    x0 = initial_point(cfg, n, obj.p)
    exact = obj.exact_minimizer()
    x_star = exact if exact is not None else None
    problems = []
    for radius, graph in graphs:
        prob = Problem.build(graph, obj, x0, x_star=x_star)
        x_star = prob.x_star  # solve the reference once and share it
        problems.append((radius, prob))
    return problems


def grid_for(spec, obj):
    kwargs = {}
    if spec.step_exponents is not None:
        kwargs["step_exponents"] = spec.step_exponents
    if spec.betas is not None:
        kwargs["betas"] = spec.betas
    grid = default_grid(spec.name, obj, **kwargs)
    if spec.schedules is not None and Algorithm(spec.name).accelerated:
        steps = sorted({c.step for c in grid}, reverse=True)
        grid = [Candidate(a, m) for a in steps for m in spec.schedules]
    return grid


@dataclass
class AlgorithmOutcome:
    label: str
    algorithm: str
    step: float
    momentum: MomentumSchedule
    tuned: bool
    tuned_iters: int = None
    trace: object = None

    def summary(self, target, metric, hold=0):
        t = self.trace
        return {
            "algorithm": self.algorithm,
            "step": self.step,
            "momentum": self.momentum.to_json(),
            "tuned": self.tuned,
            "tuned_iters_to_target": self.tuned_iters,
            "iters_to_target": t.first_below(target, metric, hold),
            "final_residual": t.records[-1].residual,
            "final_gap": t.records[-1].gap,
            "max_drift": float(max(r.drift for r in t.records)),
        }


@dataclass
class ProblemOutcome:
    tag: str
    radius: float
    problem: Problem
    algorithms: list = field(default_factory=list)
    central: object = None

    @property
    def traces(self):
        out = [a.trace for a in self.algorithms]
        if self.central is not None:
            out.append(self.central)
        return out


def _resolve(spec, prob, cfg):
    if not spec.auto_tune:
        mom = spec.momentum
        return spec.step, mom, False, None
    res = tune(prob, spec.name, grid_for(spec, prob.obj), target=cfg.target,
               max_iters=cfg.iters, metric=cfg.tune_metric, hold=cfg.tune_hold)
    log.info("tuned %s: step=%.4g momentum=%s iters=%d", spec.label, res.step,
             res.momentum.label(), res.iters_to_target)
    return res.step, res.momentum, True, res.iters_to_target


def solve_scenario(cfg):
    """Build every problem of ``cfg``, tune where requested, and run full-length traces."""
    outcomes = []
    problems = build_problems(cfg)
    multi = len(problems) > 1
    for idx, (radius, prob) in enumerate(problems):
        tag = f"G{idx + 1}" if multi else ""
        po = ProblemOutcome(tag, radius, prob)
        for spec in cfg.algorithms:
            step, mom, tuned, iters = _resolve(spec, prob, cfg)
            rec = prob.run(spec.name, step, mom, cfg.iters, label=spec.label,
                           timing=cfg.record_timing)
            cfg_mom = prob.config(spec.name, step, mom).momentum
            po.algorithms.append(AlgorithmOutcome(spec.label, spec.name, step, cfg_mom, tuned,
                                                  iters, rec.trace))
        if cfg.central:
            c = cfg.central if isinstance(cfg.central, dict) else {}
            mom = MomentumSchedule.from_json(c["momentum"]) if "momentum" in c else None
            po.central = prob.run_central(cfg.iters, step=c.get("step"), momentum=mom,
                                          timing=cfg.record_timing).trace
        outcomes.append(po)
    return outcomes


def _prefixed(tag, name):
    return f"{tag}_{name}" if tag else name


def _summary(cfg, outcomes):
    metric = "gap" if cfg.tune_metric == "gap" else "residual"
    out = {"scenario": cfg.scenario, "seed": cfg.seed, "target": cfg.target,
           "tune_metric": cfg.tune_metric, "iters": cfg.iters, "problems": []}
    for po in outcomes:
        prob = po.problem
        entry = {
            "tag": po.tag or None,
            "radius": po.radius,
            "n": prob.n,
            "edges": prob.graph.num_edges,
            "L": prob.obj.L,
            "mu": prob.obj.mu,
            "x_star": prob.x_star.tolist(),
            "f_star": prob.f_star,
            "algorithms": {a.label: a.summary(cfg.target, metric, cfg.tune_hold)
                           for a in po.algorithms},
        }
        if po.central is not None:
            entry["central"] = {
                "iters_to_target": po.central.first_below(cfg.target, metric, cfg.tune_hold),
                "final_residual": po.central.records[-1].residual,
                "final_gap": po.central.records[-1].gap,
            }
        out["problems"].append(entry)
    return out


def write_outputs(cfg, outcomes, out_dir):
    """CSV per trace, SVG per problem, ``summary.json``; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    try:
        for po in outcomes:
            for trace in po.traces:
                path = os.path.join(out_dir, _prefixed(po.tag, f"{trace.label}.csv"))
                emit_csv(trace, path)
                written.append(path)
            title = f"{cfg.scenario} {po.tag}".strip()
            path = os.path.join(out_dir, _prefixed(po.tag, "residual.svg"))
            emit_svg(po.traces, path, title=title)
            written.append(path)
            if not po.problem.obj.strongly_convex:
                path = os.path.join(out_dir, _prefixed(po.tag, "gap.svg"))
                emit_svg(po.traces, path, metric="gap", ylabel="optimality gap", title=title)
                written.append(path)
        path = os.path.join(out_dir, "summary.json")
        try:
            with open(path, "w") as fh:
                json.dump(_summary(cfg, outcomes), fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    except BaseException:
        _remove(written)
        raise
    return written


def _remove(paths):
    for p in paths:
        try:
            os.remove(p)
        except OSError:
            pass


def run_scenario(cfg, out_dir=None):
    """Run ``cfg`` end to end; with ``out_dir`` also write CSV/SVG/JSON reports.

    Returns the list of :class:`ProblemOutcome`. If anything fails after
    output writing started, files already written are removed.
    """
    outcomes = solve_scenario(cfg)
    if out_dir is not None:
        write_outputs(cfg, outcomes, out_dir)
    return outcomes


def sweep(cfg, out_dir=None, workers=1):
    """Evaluate every tuning candidate (no pruning) and report the full tables."""
    report = {"scenario": cfg.scenario, "seed": cfg.seed, "target": cfg.target,
              "metric": cfg.tune_metric, "problems": []}
    tables = []
    for idx, (radius, prob) in enumerate(build_problems(cfg)):
        tag = f"G{idx + 1}" if cfg.scenario == "sparsity_study" else ""
        entry = {"tag": tag or None, "radius": radius, "edges": prob.graph.num_edges,
                 "selected": {}}
        for spec in cfg.algorithms:
            try:
                res = tune(prob, spec.name, grid_for(spec, prob.obj), target=cfg.target,
                           max_iters=cfg.iters, metric=cfg.tune_metric, prune=False,
                           workers=workers, hold=cfg.tune_hold)
                entry["selected"][spec.label] = {
                    "step": res.step, "momentum": res.momentum.to_json(),
                    "iters_to_target": res.iters_to_target}
                results = res.results
            except DistNesterovError as exc:
                entry["selected"][spec.label] = {"error": str(exc)}
                results = getattr(exc, "results", [])
            tables.append((_prefixed(tag, f"sweep_{spec.label}.csv"), results))
        report["problems"].append(entry)

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        written = []
        try:
            for name, results in tables:
                path = os.path.join(out_dir, name)
                with open(path, "w") as fh:
                    fh.write("step,momentum,status,iters_to_target,final\n")
                    for r in results:
                        fh.write(f"{r.candidate.step!r},{r.candidate.momentum.label()},{r.status},"
                                 f"{'' if r.iters is None else r.iters},{r.final!r}\n")
                written.append(path)
            path = os.path.join(out_dir, "sweep.json")
            with open(path, "w") as fh:
                json.dump(report, fh, indent=2, sort_keys=True)
                fh.write("\n")
            written.append(path)
        except OSError as exc:
            _remove(written)
            raise OutputError(f"cannot write sweep output in {out_dir}: {exc}") from exc
    return report

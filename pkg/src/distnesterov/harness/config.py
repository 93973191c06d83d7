"""Run configuration: JSON schema validation and per-scenario defaults."""

import copy
from dataclasses import dataclass, field
from importlib import resources
import json

import jsonschema

from ..central import MomentumSchedule
from ..errors import ConfigError, OutputError

SCENARIOS = ("logistic_sc", "quartic_nonsc", "sparsity_study", "custom")

_DEFAULTS = {
    "logistic_sc": {
        "graph": {"n": 30, "radius": 0.45},
        "objective": {"kind": "logistic", "p": 10, "m_per_agent": 5, "lam": 1e-2},
        "algorithms": [{"name": a} for a in ("AB", "ABN", "FROST", "FROZEN")],
        "iters": 10_000,
        "target": 1e-8,
        "central": False,
    },
    "quartic_nonsc": {
        "graph": {"n": 30, "radius": 0.45},
        "objective": {"kind": "quartic"},
        "algorithms": [{"name": a} for a in ("AB", "ABN", "FROST", "FROZEN")],
        "iters": 10_000,
        "target": 1e-8,
        "tune_metric": "gap",
        "central": False,
    },
    "sparsity_study": {
        "graph": {"n": 30, "radii": [0.1, 0.2, 0.9]},
        "objective": {"kind": "logistic", "p": 10, "m_per_agent": 5, "lam": 1e-2},
        "algorithms": [{"name": "ABN"}, {"name": "FROZEN"}],
        "iters": 10_000,
        "target": 1e-6,
        "central": True,
    },
    "custom": {
        "graph": {"n": 10, "radius": 0.5},
        "objective": {"kind": "quadratic", "p": 2},
        "iters": 1000,
        "target": 1e-8,
        "central": False,
    },
}

_COMMON = {"seed": 0, "x0": "random", "record_timing": False, "tune_metric": "residual",
           "tune_hold": 100}


def load_schema():
    with resources.files(__package__).joinpath("config_schema.json").open() as fh:
        return json.load(fh)


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    label: str
    step: float = None
    momentum: MomentumSchedule = None
    step_exponents: tuple = None
    betas: tuple = None
    schedules: tuple = None

    @property
    def auto_tune(self):
        return self.step is None


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    seed: int
    graph: dict
    objective: dict
    algorithms: tuple
    iters: int
    target: float
    tune_metric: str
    tune_hold: int
    x0: str
    record_timing: bool
    central: object = False
    raw: dict = field(default=None, compare=False, repr=False)

    def with_seed(self, seed):
        raw = dict(self.raw)
        raw["seed"] = int(seed)
        return parse_config(raw)


def _merge(defaults, user):
    out = copy.deepcopy(defaults)
    for key, val in user.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            # an embedded graph or dataset replaces the generator parameters
            if key == "graph" and "digraph" in val:
                out[key] = {}
            if key == "objective" and val.get("kind", out[key].get("kind")) != out[key].get("kind"):
                out[key] = {}
            out[key].update(val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def _algorithm_spec(entry):
    mom = entry.get("momentum")
    tune = entry.get("tune", {})
    exps = tune.get("step_exponents")
    if exps is not None and len(exps) == 2 and all(float(e).is_integer() for e in exps):
        lo, hi = sorted(int(e) for e in exps)
        exps = tuple(range(lo, hi + 1))
    return AlgorithmSpec(
        name=entry["name"],
        label=entry.get("label", entry["name"]),
        step=entry.get("step"),
        momentum=MomentumSchedule.from_json(mom) if mom is not None else None,
        step_exponents=tuple(exps) if exps is not None else None,
        betas=tuple(tune["betas"]) if "betas" in tune else None,
        schedules=tuple(MomentumSchedule.from_json(s) for s in tune["schedules"])
        if "schedules" in tune else None,
    )


def parse_config(obj):
    """Validate a config mapping against the schema and fill scenario defaults."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    try:
        jsonschema.validate(obj, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None
    merged = _merge({**_COMMON, **_DEFAULTS[obj["scenario"]]}, obj)
    algos = merged.get("algorithms") or []
    if not algos:
        raise ConfigError("config needs at least one algorithm")
    labels = [a.get("label", a["name"]) for a in algos]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"algorithm labels must be unique, got {labels}")
    g = merged["graph"]
    if merged["scenario"] == "sparsity_study" and not g.get("radii"):
        raise ConfigError("sparsity_study needs graph.radii")
    if "digraph" not in g and "n" not in g:
        raise ConfigError("graph needs either n or an embedded digraph")
    return RunConfig(
        scenario=merged["scenario"],
        seed=int(merged["seed"]),
        graph=g,
        objective=merged["objective"],
        algorithms=tuple(_algorithm_spec(a) for a in algos),
        iters=int(merged["iters"]),
        target=float(merged["target"]),
        tune_metric=merged["tune_metric"],
        tune_hold=int(merged["tune_hold"]),
        x0=merged["x0"],
        record_timing=bool(merged["record_timing"]),
        central=merged.get("central", False),
        raw=obj,
    )


def load_config(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise OutputError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(obj)

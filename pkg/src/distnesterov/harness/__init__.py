"""Experiment orchestration: configs, tuning, traces and reports."""

from .config import RunConfig, load_config, parse_config
from .problem import Problem
from .scenarios import run_scenario, sweep
from .svg import emit_svg
from .trace import Trace, TraceRecorder, emit_csv, read_csv, residual
from .tuning import Candidate, TuneResult, default_grid, tune

__all__ = [
    "Candidate", "Problem", "RunConfig", "Trace", "TraceRecorder", "TuneResult",
    "default_grid", "emit_csv", "emit_svg", "load_config", "parse_config", "read_csv",
    "residual", "run_scenario", "sweep", "tune",
]

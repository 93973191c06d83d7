"""Per-iteration metric traces and their CSV form."""

import csv
from dataclasses import dataclass, field
import math
import time
from typing import NamedTuple

import numpy as np

from ..distributed import tracking_drift
from ..errors import OutputError

CSV_COLUMNS = ("k", "residual", "gap", "drift", "wall_ms")


def residual(x, x_star):
    """Average distance ``(1/n) sum_i ||x_i - x*||_2`` of the agents to ``x*``."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    d = x - np.asarray(x_star, dtype=float).reshape(1, -1)
    return float(np.mean(np.sqrt(np.sum(d * d, axis=1))))


class Record(NamedTuple):
    k: int
    residual: float
    gap: float
    drift: float
    wall_ms: float


@dataclass
class Trace:
    label: str
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def first_below(self, threshold, metric="residual", hold=0):
        """Smallest recorded ``k`` with ``metric <= threshold``, or ``None``.

        With ``hold > 0`` the metric must also stay at or below the threshold
        through ``k + hold``; a streak cut off by the end of the trace does
        not count.
        """
        start = None
        for r in self.records:
            if getattr(r, metric) <= threshold:
                if start is None:
                    start = r.k
                if r.k - start >= hold:
                    return start
            else:
                start = None
        return None


class TraceRecorder:
    """Probe for :func:`distnesterov.distributed.run` that fills a :class:`Trace`.

    Returning ``False`` from the probe stops the run; this happens once
    ``stop_metric`` has stayed at or below ``stop_below`` for ``stop_hold``
    further iterations (``hit`` is where that streak began), or when the
    residual exceeds ``abort_above``.
    """

    def __init__(self, label, obj, x_star, f_star, pi=None, timing=False,
                 stop_below=None, stop_metric="residual", stop_hold=0, abort_above=None):
        self.trace = Trace(label)
        self.obj = obj
        self.x_star = np.asarray(x_star, dtype=float)
        self.f_star = f_star
        self.pi = pi
        self.timing = timing
        self.stop_below = stop_below
        self.stop_metric = stop_metric
        self.stop_hold = int(stop_hold)
        self.abort_above = abort_above
        self._streak = None
        self._t0 = time.perf_counter()
        self.hit = None
        self.aborted = False

    def record(self, k, x, drift=0.0):
        res = residual(x, self.x_star)
        gap = self.obj.global_value(np.asarray(x).mean(axis=0)) - self.f_star
        wall = (time.perf_counter() - self._t0) * 1e3 if self.timing else 0.0
        rec = Record(int(k), res, float(gap), float(drift), wall)
        self.trace.records.append(rec)
        if self.stop_below is not None:
            if getattr(rec, self.stop_metric) <= self.stop_below:
                if self._streak is None:
                    self._streak = int(k)
                if k - self._streak >= self.stop_hold:
                    self.hit = self._streak
                    return False
            else:
                self._streak = None
        if self.abort_above is not None and not res <= self.abort_above:
            self.aborted = True
            return False
        return True

    def __call__(self, k, state):
        return self.record(k, state.x, tracking_drift(state, self.pi))


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def emit_csv(trace, path):
    """Write ``k,residual,gap,drift,wall_ms`` with round-trip float precision."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in trace.records:
                w.writerow([_fmt(v) for v in r])
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def read_csv(path, label=None):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise OutputError(f"{path}: unexpected header {rows[:1]}")
    records = [Record(int(r[0]), *(float(v) for v in r[1:])) for r in rows[1:]]
    return Trace(label or str(path), records)


def finite_or_nan(x):
    return x if math.isfinite(x) else math.nan

"""Outage simulations from every start step of the year."""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from resil.dispatch import SiteInputs, SystemDesign, run_lanes
from resil.errors import ResilError
from resil.timebase import TimeBase, format_number


@dataclass(frozen=True)
class SurvivalSeries:
    """Survived outage length, in steps, for the outage starting at each step."""

    r: np.ndarray = field(repr=False)
    tb: TimeBase = TimeBase()

    def __post_init__(self):
        r = np.array(self.r, dtype=np.int64)
        if r.ndim != 1 or r.size != self.tb.ts:
            raise ResilError(f"survival series needs {self.tb.ts} entries, got {r.size}")
        if r.size and (r.min() < 0 or r.max() > self.tb.ts):
            raise ResilError(f"survived steps must lie in [0, {self.tb.ts}]")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def hours(self) -> np.ndarray:
        return self.r * self.tb.dt_hours

    def __eq__(self, other):
        if not isinstance(other, SurvivalSeries):
            return NotImplemented
        return self.tb == other.tb and np.array_equal(self.r, other.r)

    __hash__ = None


def default_workers() -> int:
    env = os.environ.get("RESIL_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ResilError(f"RESIL_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ResilError(f"RESIL_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def simulate_year(
    inputs: SiteInputs,
    design: SystemDesign,
    tb: TimeBase,
    workers: Optional[int] = None,
) -> SurvivalSeries:
    """Simulate an outage starting at every step and collect survived steps.

    Starts are split into contiguous blocks, one per worker thread. Each
    lane is independent, so the result is bit-identical for any number of
    workers.
    """
    inputs.check(tb)
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ResilError(f"workers must be >= 1, got {workers}")
    blocks = np.array_split(np.arange(tb.ts), min(workers, tb.ts))
    if len(blocks) == 1:
        r = run_lanes(blocks[0], inputs, design, tb)
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            parts = list(pool.map(lambda b: run_lanes(b, inputs, design, tb), blocks))
        r = np.concatenate(parts)
    return SurvivalSeries(r, tb)


def summary(series: SurvivalSeries) -> dict:
    h = series.hours
    return {
        "min_hours": float(h.min()),
        "max_hours": float(h.max()),
        "mean_hours": float(h.sum() / h.size),
    }


def survival_csv(series: SurvivalSeries) -> str:
    buf = io.StringIO()
    buf.write("start_index,survived_hours\n")
    for j, h in enumerate(series.hours):
        buf.write(f"{j},{format_number(h)}\n")
    return buf.getvalue()


def parse_survival_csv(text: str, tb: TimeBase) -> SurvivalSeries:
    """Inverse of :func:`survival_csv`. Rows must cover every start in order."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ResilError("survival CSV is empty")
    if lines[0].replace(" ", "") != "start_index,survived_hours":
        raise ResilError(f"unexpected survival CSV header {lines[0]!r}")
    rows = lines[1:]
    if len(rows) != tb.ts:
        raise ResilError(f"survival CSV has {len(rows)} rows, expected {tb.ts}")
    r = np.empty(tb.ts, dtype=np.int64)
    for j, line in enumerate(rows):
        parts = line.split(",")
        if len(parts) != 2:
            raise ResilError(f"row {j + 1}: expected 2 columns, got {len(parts)}")
        try:
            idx = int(parts[0])
            hours = float(parts[1])
        except ValueError:
            raise ResilError(f"row {j + 1}: malformed values {line!r}") from None
        if idx != j:
            raise ResilError(f"row {j + 1}: start_index {idx} out of order")
        steps = hours * tb.steps_per_hour
        if not np.isfinite(steps) or abs(steps - round(steps)) > 1e-6:
            raise ResilError(f"row {j + 1}: {hours} h is not a whole number of steps")
        r[j] = round(steps)
    return SurvivalSeries(r, tb)

"""Survival probabilities over outage duration.

The probability of surviving a ``d``-hour outage is the share of outage
starts whose survived duration exceeds ``d`` hours. The default comparison
is strict, so a start that survived exactly ``d`` hours does not count; the
``inclusive`` comparator counts it.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from resil.errors import EmptySubsetError, ResilError
from resil.sweep import SurvivalSeries
from resil.timebase import format_number

COMPARATORS = ("strict", "inclusive")

Subset = Union[Sequence[int], np.ndarray, None]


def _check_comparator(comparator: str):
    if comparator not in COMPARATORS:
        raise ResilError(f"survival_comparator must be one of {COMPARATORS}, got {comparator!r}")


def _subset_hours(series: SurvivalSeries, subset: Subset) -> np.ndarray:
    h = series.hours
    if subset is None:
        sel = h
    else:
        idx = np.asarray(subset)
        if idx.dtype == bool:
            if idx.shape != h.shape:
                raise ResilError("boolean subset must cover every start")
            sel = h[idx]
        else:
            idx = idx.astype(np.int64, copy=False)
            if idx.size and (idx.min() < 0 or idx.max() >= h.size):
                raise ResilError("subset index outside the series")
            sel = h[idx]
    if sel.size == 0:
        raise EmptySubsetError("subset of outage starts is empty")
    return sel


def _count_surviving(sorted_hours: np.ndarray, d, comparator: str):
    side = "right" if comparator == "strict" else "left"
    return sorted_hours.size - np.searchsorted(sorted_hours, d, side=side)


def r_max_hours(series: SurvivalSeries, subset: Subset = None) -> int:
    """Longest survived duration, rounded up to whole hours."""
    return int(math.ceil(_subset_hours(series, subset).max()))


def survival_probability(
    series: SurvivalSeries,
    d_hours: float,
    subset: Subset = None,
    comparator: str = "strict",
) -> float:
    _check_comparator(comparator)
    if not d_hours > 0:
        raise ResilError(f"duration must be positive, got {d_hours!r}")
    h = np.sort(_subset_hours(series, subset))
    return int(_count_surviving(h, d_hours, comparator)) / h.size


@dataclass(frozen=True)
class ProbabilityCurve:
    """``p[i]`` is the probability of surviving an outage of ``i + 1`` hours."""

    p: np.ndarray
    n_starts: int

    @property
    def r_max_hours(self) -> int:
        return len(self.p)

    @property
    def durations(self) -> np.ndarray:
        return np.arange(1, len(self.p) + 1)

    def at(self, d_hours: int) -> float:
        if d_hours < 1:
            raise ResilError(f"duration must be >= 1 h, got {d_hours}")
        return float(self.p[d_hours - 1]) if d_hours <= len(self.p) else 0.0


def _curve(hours: np.ndarray, length: int, comparator: str) -> np.ndarray:
    h = np.sort(hours)
    d = np.arange(1, length + 1)
    return _count_surviving(h, d, comparator) / h.size


def probability_curve(
    series: SurvivalSeries,
    subset: Subset = None,
    comparator: str = "strict",
    length: Optional[int] = None,
) -> ProbabilityCurve:
    """Survival probability for every whole-hour duration 1..r_max.

    ``length`` overrides the number of durations evaluated, which is how
    group curves are padded to a common width.
    """
    _check_comparator(comparator)
    h = _subset_hours(series, subset)
    if length is None:
        length = int(math.ceil(h.max()))
    return ProbabilityCurve(_curve(h, length, comparator), h.size)


@dataclass(frozen=True)
class AggregatedCurves:
    """Curves per start hour-of-day (24 rows) and start month (12 rows).

    All rows share the overall r_max width. A group with no starts (only
    possible on truncated test years) has a zero row and count 0.
    """

    overall: ProbabilityCurve
    by_hour: np.ndarray
    by_month: np.ndarray
    hour_counts: np.ndarray
    month_counts: np.ndarray


def aggregate(series: SurvivalSeries, comparator: str = "strict") -> AggregatedCurves:
    _check_comparator(comparator)
    tb = series.tb
    overall = probability_curve(series, comparator=comparator)
    width = overall.r_max_hours
    hours = series.hours

    def grouped(keys: np.ndarray, labels) -> tuple[np.ndarray, np.ndarray]:
        rows = np.zeros((len(labels), width))
        counts = np.zeros(len(labels), dtype=np.int64)
        for i, label in enumerate(labels):
            sel = hours[keys == label]
            counts[i] = sel.size
            if sel.size:
                rows[i] = _curve(sel, width, comparator)
        return rows, counts

    by_hour, hour_counts = grouped(tb.hours_of_day(), range(24))
    by_month, month_counts = grouped(tb.months(), range(1, 13))
    return AggregatedCurves(overall, by_hour, by_month, hour_counts, month_counts)


def curve_csv(curve: ProbabilityCurve) -> str:
    buf = io.StringIO()
    buf.write("duration_hours,probability\n")
    for d, p in zip(curve.durations, curve.p):
        buf.write(f"{d},{format_number(p)}\n")
    return buf.getvalue()


def matrix_csv(rows: np.ndarray, labels, label_header: str) -> str:
    width = rows.shape[1]
    buf = io.StringIO()
    buf.write(",".join([label_header] + [str(d) for d in range(1, width + 1)]) + "\n")
    for label, row in zip(labels, rows):
        buf.write(",".join([str(label)] + [format_number(p) for p in row]) + "\n")
    return buf.getvalue()


def by_hour_csv(agg: AggregatedCurves) -> str:
    return matrix_csv(agg.by_hour, range(24), "hour_of_day")


def by_month_csv(agg: AggregatedCurves) -> str:
    return matrix_csv(agg.by_month, range(1, 13), "month")

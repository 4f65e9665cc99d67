"""Simulation year, calendar indexing and series ingestion.

The year is a fixed non-leap 365-day year whose first step is Sunday,
January 1 at 00:00. All durations inside the engine are counted in
steps; conversion to hours happens only when reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from resil.errors import (
    IndexOutOfRangeError,
    NegativeValueError,
    NonFiniteError,
    OutOfRangeError,
    ResilError,
    WrongLengthError,
)

DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
UNITS = ("kW", "fraction", "factor")

_MONTH_START_DAY = np.cumsum((0,) + DAYS_IN_MONTH)


@dataclass(frozen=True)
class TimeBase:
    """Step resolution of the simulated year.

    ``days`` exists so tests can run on a truncated toy year; production
    runs always use the full 365 days.
    """

    steps_per_hour: int = 1
    days: int = 365

    def __post_init__(self):
        if not isinstance(self.steps_per_hour, (int, np.integer)) or self.steps_per_hour < 1:
            raise ResilError(f"steps_per_hour must be a positive integer, got {self.steps_per_hour!r}")
        if not isinstance(self.days, (int, np.integer)) or not 1 <= self.days <= 365:
            raise ResilError(f"days must be an integer in [1, 365], got {self.days!r}")

    @property
    def ts(self) -> int:
        return self.days * 24 * self.steps_per_hour

    @property
    def dt_hours(self) -> float:
        return 1.0 / self.steps_per_hour

    @property
    def steps_per_day(self) -> int:
        return 24 * self.steps_per_hour

    def _check(self, index: int) -> int:
        if not 0 <= index < self.ts:
            raise IndexOutOfRangeError(f"step index {index} outside [0, {self.ts})")
        return int(index)

    def hour_of_day(self, index: int) -> int:
        index = self._check(index)
        return (index // self.steps_per_hour) % 24

    def day_of_week(self, index: int) -> int:
        """0 = Sunday."""
        index = self._check(index)
        return (index // self.steps_per_day) % 7

    def month_of(self, index: int) -> int:
        index = self._check(index)
        day = index // self.steps_per_day
        return int(np.searchsorted(_MONTH_START_DAY, day, side="right"))

    def hours_of_day(self) -> np.ndarray:
        """Vector form of :meth:`hour_of_day` over every step of the year."""
        return (np.arange(self.ts) // self.steps_per_hour) % 24

    def months(self) -> np.ndarray:
        days = np.arange(self.ts) // self.steps_per_day
        return np.searchsorted(_MONTH_START_DAY, days, side="right")


def hour_of_day(index: int, tb: TimeBase) -> int:
    return tb.hour_of_day(index)


def month_of(index: int, tb: TimeBase) -> int:
    return tb.month_of(index)


def day_of_week(index: int, tb: TimeBase) -> int:
    return tb.day_of_week(index)


def is_leap_year(year: int) -> bool:
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


@dataclass(frozen=True)
class YearSeries:
    """One value per simulation step. ``values`` is a read-only float array."""

    values: np.ndarray = field(repr=False)
    unit: str = "kW"

    def __post_init__(self):
        if self.unit not in UNITS:
            raise ResilError(f"unknown unit tag {self.unit!r}; expected one of {UNITS}")
        arr = np.array(self.values, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, YearSeries):
            return NotImplemented
        return self.unit == other.unit and np.array_equal(self.values, other.values)

    __hash__ = None

    def scaled(self, factor: float) -> YearSeries:
        return YearSeries(self.values * factor, self.unit)


def make_series(
    values: Iterable[float],
    unit: str,
    tb: TimeBase,
    allow_factor_above_one: bool = False,
) -> YearSeries:
    """Build a validated :class:`YearSeries`.

    Raises WrongLengthError, NonFiniteError, NegativeValueError or
    OutOfRangeError. Fractions must lie in [0, 1]; production factors may
    exceed 1 only when ``allow_factor_above_one`` is set.
    """
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    if arr.ndim != 1 or arr.size != tb.ts:
        raise WrongLengthError(f"expected {tb.ts} values, got {arr.size}")
    bad = ~np.isfinite(arr)
    if bad.any():
        raise NonFiniteError(f"non-finite value at index {int(np.argmax(bad))}")
    neg = arr < 0
    if neg.any():
        i = int(np.argmax(neg))
        raise NegativeValueError(f"negative value {arr[i]!r} at index {i}")
    if unit == "fraction" or (unit == "factor" and not allow_factor_above_one):
        over = arr > 1
        if over.any():
            i = int(np.argmax(over))
            raise OutOfRangeError(f"{unit} value {arr[i]!r} at index {i} exceeds 1")
    return YearSeries(arr, unit)


def constant_series(value: float, unit: str, tb: TimeBase) -> YearSeries:
    return make_series(np.full(tb.ts, float(value)), unit, tb)


def parse_series(
    text: str | TextIO,
    unit: str,
    tb: TimeBase,
    allow_factor_above_one: bool = False,
) -> YearSeries:
    """Parse one decimal per line; blank lines and ``#`` lines are skipped."""
    lines = text.splitlines() if isinstance(text, str) else text
    values = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            v = float(line)
        except ValueError:
            raise ResilError(f"line {lineno}: not a number: {line!r}") from None
        if not math.isfinite(v):
            raise NonFiniteError(f"line {lineno}: non-finite value {line!r}")
        values.append(v)
    return make_series(values, unit, tb, allow_factor_above_one)


def format_number(x: float) -> str:
    """Shortest round-trip decimal; integral values are written without '.0'."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def serialize_series(series: YearSeries) -> str:
    return "".join(format_number(v) + "\n" for v in series.values)


def read_series_file(path, unit: str, tb: TimeBase, allow_factor_above_one: bool = False) -> YearSeries:
    with open(path, encoding="utf-8") as fh:
        return parse_series(fh.read(), unit, tb, allow_factor_above_one)

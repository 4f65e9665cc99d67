"""Outage survival simulation and sizing for behind-the-meter DER systems."""

from resil.dispatch import (
    OutageState,
    SiteInputs,
    StepResult,
    SystemDesign,
    dispatch_step,
    simulate_outage,
    trace_outage,
)
from resil.errors import ResilError
from resil.sizing import OutageWindow, SizingResult, SizingSpec, size_system, window_feasible
from resil.stats import (
    AggregatedCurves,
    ProbabilityCurve,
    aggregate,
    probability_curve,
    survival_probability,
)
from resil.sweep import SurvivalSeries, simulate_year, summary
from resil.timebase import TimeBase, YearSeries, hour_of_day, make_series, month_of, parse_series

__version__ = "0.1.0"

__all__ = [
    "AggregatedCurves",
    "OutageState",
    "OutageWindow",
    "ProbabilityCurve",
    "ResilError",
    "SiteInputs",
    "SizingResult",
    "SizingSpec",
    "StepResult",
    "SurvivalSeries",
    "SystemDesign",
    "TimeBase",
    "YearSeries",
    "aggregate",
    "dispatch_step",
    "hour_of_day",
    "make_series",
    "month_of",
    "parse_series",
    "probability_curve",
    "simulate_outage",
    "simulate_year",
    "size_system",
    "summary",
    "survival_probability",
    "trace_outage",
    "window_feasible",
]

"""Load-following outage dispatch.

Each step serves the critical load in a fixed priority order:

1. solar and wind; any surplus charges the battery, the rest is dumped;
2. the generator, but only if its nameplate covers the whole residual and
   the remaining fuel covers the step's burn. Output below the minimum
   turndown is raised to it and the excess charges the battery or is
   dumped;
3. the battery, but only if it can deliver the whole residual within its
   power rating and minimum state of charge;
4. otherwise the step fails and the outage simulation stops.

The step rules are written once, over numpy arrays where each element is an
independent simulation lane. :func:`dispatch_step` runs a single lane; the
year sweep runs one lane per outage start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import NamedTuple, Optional

import numpy as np

from resil.errors import IndexOutOfRangeError, InvalidInputError, WrongLengthError
from resil.timebase import TimeBase, YearSeries, constant_series, make_series

# Slack for capacity-vs-load and fuel-vs-need comparisons (kW, gal).
TOL = 1e-9


@dataclass(frozen=True)
class SystemDesign:
    """Fixed technology sizes and operating limits for one system.

    Power in kW, energy in kWh, fuel in gallons. ``soc_min_frac`` is a
    fraction of ``storage_kwh`` and ``min_turndown_frac`` a fraction of
    ``gen_kw``. The fuel curve is ``(slope * output_kw + intercept) * dt``
    gallons per step, charged only while the generator runs.
    """

    pv_kw: float = 0.0
    wind_kw: float = 0.0
    storage_kw: float = 0.0
    storage_kwh: float = 0.0
    soc_min_frac: float = 0.0
    charge_eff: float = 1.0
    discharge_eff: float = 1.0
    gen_kw: float = 0.0
    fuel_available_gal: float = 0.0
    fuel_slope_gal_per_kwh: float = 0.0
    fuel_intercept_gal_per_hr: float = 0.0
    min_turndown_frac: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.integer, np.floating)):
                raise InvalidInputError(f"{f.name} must be a number, got {v!r}")
            v = float(v)
            if not math.isfinite(v) or v < 0:
                raise InvalidInputError(f"{f.name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, f.name, v)
        if self.soc_min_frac >= 1:
            raise InvalidInputError(f"soc_min_frac must be in [0, 1), got {self.soc_min_frac}")
        for name in ("charge_eff", "discharge_eff"):
            if not 0 < getattr(self, name) <= 1:
                raise InvalidInputError(f"{name} must be in (0, 1], got {getattr(self, name)}")
        if self.min_turndown_frac > 1:
            raise InvalidInputError(f"min_turndown_frac must be in [0, 1], got {self.min_turndown_frac}")
        if self.storage_kwh == 0 and self.storage_kw != 0:
            raise InvalidInputError("storage_kw must be 0 when storage_kwh is 0")

    @property
    def soc_min_kwh(self) -> float:
        return self.soc_min_frac * self.storage_kwh

    def with_sizes(self, **sizes) -> SystemDesign:
        return replace(self, **sizes)


@dataclass(frozen=True)
class OutageState:
    soc_kwh: float
    fuel_gal: float


@dataclass(frozen=True)
class StepResult:
    met: bool
    renewable_to_load: float = 0.0
    gen_to_load: float = 0.0
    storage_to_load: float = 0.0
    charge_kw: float = 0.0
    gen_output: float = 0.0
    dumped_kw: float = 0.0
    fuel_used_gal: float = 0.0


class _Lanes(NamedTuple):
    met: np.ndarray
    soc: np.ndarray
    fuel: np.ndarray
    renewable_to_load: np.ndarray
    gen_to_load: np.ndarray
    storage_to_load: np.ndarray
    charge_kw: np.ndarray
    gen_output: np.ndarray
    dumped_kw: np.ndarray
    fuel_used: np.ndarray


def _step(load, renewable, soc, fuel, d: SystemDesign, dt: float, flows: bool = True):
    """Advance every lane by one step.

    With ``flows=False`` only ``(met, soc, fuel)`` is returned; the state
    arithmetic is identical either way.
    """
    cap = d.storage_kwh
    soc_min = d.soc_min_kwh
    net = load - renewable
    covered = net <= 0

    if covered.all():
        # fast path: every lane is served by renewables alone
        surplus = renewable - load
        run = discharge = None
    else:
        # generator: all-or-nothing on capacity, then on fuel
        g = np.maximum(net, d.min_turndown_frac * d.gen_kw)
        need = (d.fuel_slope_gal_per_kwh * g + d.fuel_intercept_gal_per_hr) * dt
        run = (~covered) & (d.gen_kw > 0) & (d.gen_kw >= net - TOL) & (fuel >= need - TOL)

        # battery: all-or-nothing on the full residual
        deliverable = np.minimum(d.storage_kw, np.maximum(soc - soc_min, 0.0) * d.discharge_eff / dt)
        discharge = (~covered) & (~run) & (d.storage_kw > 0) & (deliverable >= net - TOL)

        # surplus from renewables (rule 1) or from turndown excess (rule 2)
        surplus = np.where(covered, renewable - load, np.where(run, g - net, 0.0))

    if cap > 0:
        headroom = np.maximum(cap - soc, 0.0)
        charge = np.minimum(np.minimum(surplus, d.storage_kw), headroom / (d.charge_eff * dt))
        charged_soc = np.minimum(soc + d.charge_eff * charge * dt, cap)
    else:
        charge = np.zeros_like(surplus)
        charged_soc = soc

    if run is None:
        met = covered
        new_soc = charged_soc
        new_fuel = fuel
    else:
        met = covered | run | discharge
        discharged_soc = np.maximum(soc - net * dt / d.discharge_eff, soc_min)
        new_soc = np.where(discharge, discharged_soc, np.where(covered | run, charged_soc, soc))
        new_fuel = np.where(run, np.maximum(fuel - need, 0.0), fuel)

    if not flows:
        return met, new_soc, new_fuel

    zeros = np.zeros_like(net)
    if run is None:
        run = discharge = np.zeros_like(covered)
        g = need = zeros
    return _Lanes(
        met=met,
        soc=new_soc,
        fuel=new_fuel,
        renewable_to_load=np.where(covered, load, renewable),
        gen_to_load=np.where(run, net, 0.0),
        storage_to_load=np.where(discharge, net, 0.0),
        charge_kw=charge,
        gen_output=np.where(run, g, 0.0),
        dumped_kw=surplus - charge,
        fuel_used=np.where(run, np.minimum(need, fuel), 0.0),
    )


def _check_scalar(name: str, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(v) or v < 0:
        raise InvalidInputError(f"{name} must be finite and >= 0, got {value!r}")
    return v


def dispatch_step(
    load_kw: float,
    pv_out_kw: float,
    wind_out_kw: float,
    design: SystemDesign,
    state: OutageState,
    dt_hours: float,
) -> tuple[StepResult, OutageState]:
    """Dispatch one step of an outage.

    Returns the step's flows and the state after the step. On an unmet step
    the returned state equals the input state.
    """
    args = [
        _check_scalar("load_kw", load_kw),
        _check_scalar("pv_out_kw", pv_out_kw),
        _check_scalar("wind_out_kw", wind_out_kw),
    ]
    soc = _check_scalar("soc_kwh", state.soc_kwh)
    fuel = _check_scalar("fuel_gal", state.fuel_gal)
    dt = _check_scalar("dt_hours", dt_hours)
    if dt == 0:
        raise InvalidInputError("dt_hours must be positive")
    if soc > design.storage_kwh + TOL or soc < design.soc_min_kwh - TOL:
        raise InvalidInputError(
            f"soc_kwh {soc} outside [{design.soc_min_kwh}, {design.storage_kwh}]"
        )

    load, pv, wind = args
    out = _step(np.array([load]), np.array([pv + wind]), np.array([soc]), np.array([fuel]), design, dt)
    if not out.met[0]:
        return StepResult(met=False, renewable_to_load=float(out.renewable_to_load[0])), state
    result = StepResult(
        met=True,
        renewable_to_load=float(out.renewable_to_load[0]),
        gen_to_load=float(out.gen_to_load[0]),
        storage_to_load=float(out.storage_to_load[0]),
        charge_kw=float(out.charge_kw[0]),
        gen_output=float(out.gen_output[0]),
        dumped_kw=float(out.dumped_kw[0]),
        fuel_used_gal=float(out.fuel_used[0]),
    )
    return result, OutageState(float(out.soc[0]), float(out.fuel[0]))


@dataclass(frozen=True)
class SiteInputs:
    """The four year-long series driving a simulation.

    ``load`` is the critical load in kW, ``pv_factor`` and ``wind_factor``
    are output per kW of nameplate, ``soc_frac`` is the grid-connected
    battery state of charge at each step as a fraction of capacity.
    """

    load: YearSeries
    pv_factor: YearSeries
    wind_factor: YearSeries
    soc_frac: YearSeries

    @classmethod
    def build(
        cls,
        tb: TimeBase,
        load,
        pv_factor=None,
        wind_factor=None,
        soc_frac=None,
        allow_factor_above_one: bool = False,
    ) -> SiteInputs:
        """Missing production series default to zero; missing SOC to a full battery."""

        def coerce(x, unit, default):
            if x is None:
                return constant_series(default, unit, tb)
            if isinstance(x, YearSeries):
                x = x.values
            return make_series(x, unit, tb, allow_factor_above_one)

        return cls(
            load=coerce(load, "kW", 0.0),
            pv_factor=coerce(pv_factor, "factor", 0.0),
            wind_factor=coerce(wind_factor, "factor", 0.0),
            soc_frac=coerce(soc_frac, "fraction", 1.0),
        )

    def check(self, tb: TimeBase):
        for name in ("load", "pv_factor", "wind_factor", "soc_frac"):
            n = len(getattr(self, name))
            if n != tb.ts:
                raise WrongLengthError(f"{name} has {n} values, expected {tb.ts}")

    def with_load(self, load: YearSeries) -> SiteInputs:
        return replace(self, load=load)


def renewable_output(inputs: SiteInputs, design: SystemDesign) -> np.ndarray:
    """Solar plus wind output in kW at every step of the year."""
    return design.pv_kw * inputs.pv_factor.values + design.wind_kw * inputs.wind_factor.values


def initial_state(start: int, inputs: SiteInputs, design: SystemDesign) -> OutageState:
    frac = min(max(float(inputs.soc_frac.values[start]), design.soc_min_frac), 1.0)
    return OutageState(frac * design.storage_kwh, design.fuel_available_gal)


def run_lanes(
    starts: np.ndarray,
    inputs: SiteInputs,
    design: SystemDesign,
    tb: TimeBase,
    max_steps: Optional[int] = None,
) -> np.ndarray:
    """Survived steps for a batch of outage starts, simulated side by side.

    Lanes are independent: the result for a given start does not depend on
    which other starts share the batch.
    """
    ts = tb.ts
    max_steps = ts if max_steps is None else min(int(max_steps), ts)
    dt = tb.dt_hours
    starts = np.asarray(starts, dtype=np.int64)
    if starts.size and (starts.min() < 0 or starts.max() >= ts):
        raise IndexOutOfRangeError(f"outage start outside [0, {ts})")

    # doubled year so that start + k never needs wrapping
    load = np.tile(inputs.load.values, 2)
    renewable = np.tile(renewable_output(inputs, design), 2)
    frac = np.clip(inputs.soc_frac.values[starts], design.soc_min_frac, 1.0)

    survived = np.full(starts.size, max_steps, dtype=np.int64)
    lanes = np.arange(starts.size)
    pos = starts.copy()
    soc = frac * design.storage_kwh
    fuel = np.full(starts.size, design.fuel_available_gal)

    for k in range(max_steps):
        if lanes.size == 0:
            break
        idx = pos + k
        met, soc, fuel = _step(load[idx], renewable[idx], soc, fuel, design, dt, flows=False)
        if not met.all():
            survived[lanes[~met]] = k
            lanes, pos, soc, fuel = lanes[met], pos[met], soc[met], fuel[met]
    return survived


def simulate_outage(
    start: int,
    inputs: SiteInputs,
    design: SystemDesign,
    tb: TimeBase,
    max_steps: Optional[int] = None,
) -> int:
    """Consecutive steps the design meets the load for an outage at ``start``.

    Indexing wraps around the end of the year; the count is capped at one
    full year (or at ``max_steps`` when given).
    """
    inputs.check(tb)
    if not 0 <= start < tb.ts:
        raise IndexOutOfRangeError(f"outage start {start} outside [0, {tb.ts})")
    return int(run_lanes(np.array([start]), inputs, design, tb, max_steps)[0])


def trace_outage(
    start: int,
    inputs: SiteInputs,
    design: SystemDesign,
    tb: TimeBase,
    max_steps: Optional[int] = None,
) -> list[tuple[int, StepResult, OutageState]]:
    """Step-by-step record of one outage: ``(step_index, result, state_after)``.

    The final entry is the failing step, if the outage ends before the cap.
    """
    inputs.check(tb)
    if not 0 <= start < tb.ts:
        raise IndexOutOfRangeError(f"outage start {start} outside [0, {tb.ts})")
    max_steps = tb.ts if max_steps is None else min(max_steps, tb.ts)
    state = initial_state(start, inputs, design)
    trace = []
    for k in range(max_steps):
        t = (start + k) % tb.ts
        res, state = dispatch_step(
            inputs.load.values[t],
            design.pv_kw * inputs.pv_factor.values[t],
            design.wind_kw * inputs.wind_factor.values[t],
            design,
            state,
            tb.dt_hours,
        )
        trace.append((t, res, state))
        if not res.met:
            break
    return trace


__all__ = [
    "TOL",
    "OutageState",
    "SiteInputs",
    "StepResult",
    "SystemDesign",
    "dispatch_step",
    "initial_state",
    "run_lanes",
    "simulate_outage",
    "trace_outage",
]

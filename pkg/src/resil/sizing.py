"""Least-cost design that rides through one specified outage window.

A grid search over candidate PV, battery power, battery energy and generator
sizes. Cost is a capital-cost proxy: the sum of unit cost times size.
Everything that is not sized (wind, fuel stock, efficiencies, turndown,
minimum SOC, fuel curve) is taken from a base design.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from resil.dispatch import SiteInputs, SystemDesign, simulate_outage
from resil.errors import EmptyGridError, IndexOutOfRangeError, InvalidInputError, ResilError
from resil.timebase import TimeBase

SIZED = ("pv_kw", "storage_kw", "storage_kwh", "gen_kw")
# tie-break order between equal-cost candidates
TIE_BREAK = ("pv_kw", "storage_kwh", "storage_kw", "gen_kw")


@dataclass(frozen=True)
class OutageWindow:
    start: int
    duration_steps: int

    def validate(self, tb: TimeBase):
        if not 0 <= self.start < tb.ts:
            raise IndexOutOfRangeError(f"window start {self.start} outside [0, {tb.ts})")
        if not 1 <= self.duration_steps <= tb.ts:
            raise ResilError(f"window duration must be in [1, {tb.ts}] steps, got {self.duration_steps}")


def validate_grid(name: str, values: Sequence[float]) -> tuple[float, ...]:
    vals = tuple(float(v) for v in values)
    if not vals:
        raise EmptyGridError(f"{name} grid is empty")
    if any(not math.isfinite(v) or v < 0 for v in vals):
        raise ResilError(f"{name} grid values must be finite and >= 0")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ResilError(f"{name} grid must be strictly ascending")
    return vals


@dataclass(frozen=True)
class SizingSpec:
    pv_kw: Sequence[float]
    storage_kw: Sequence[float]
    storage_kwh: Sequence[float]
    gen_kw: Sequence[float]
    cost_per_pv_kw: float = 0.0
    cost_per_storage_kw: float = 0.0
    cost_per_storage_kwh: float = 0.0
    cost_per_gen_kw: float = 0.0
    base: SystemDesign = field(default_factory=SystemDesign)

    def __post_init__(self):
        for name in SIZED:
            object.__setattr__(self, name, validate_grid(name, getattr(self, name)))
        for name in SIZED:
            c = getattr(self, f"cost_per_{name}")
            if not math.isfinite(c) or c < 0:
                raise ResilError(f"cost_per_{name} must be finite and >= 0, got {c!r}")

    def cost(self, sizes: dict) -> float:
        return (
            self.cost_per_pv_kw * sizes["pv_kw"]
            + self.cost_per_storage_kw * sizes["storage_kw"]
            + self.cost_per_storage_kwh * sizes["storage_kwh"]
            + self.cost_per_gen_kw * sizes["gen_kw"]
        )

    def candidates(self):
        """Every valid grid combination as a size dict.

        Combinations with battery power but no battery energy are not
        physical designs and are left out.
        """
        for combo in itertools.product(*(getattr(self, name) for name in SIZED)):
            sizes = dict(zip(SIZED, combo))
            if sizes["storage_kwh"] == 0 and sizes["storage_kw"] > 0:
                continue
            yield sizes


@dataclass(frozen=True)
class SizingResult:
    design: Optional[SystemDesign]
    cost: Optional[float]
    evaluated: int = 0

    @property
    def feasible(self) -> bool:
        return self.design is not None

    def to_json(self) -> dict:
        d = self.design
        return {
            "pv_kw": d.pv_kw if d else None,
            "storage_kw": d.storage_kw if d else None,
            "storage_kwh": d.storage_kwh if d else None,
            "gen_kw": d.gen_kw if d else None,
            "cost": self.cost,
            "feasible": self.feasible,
        }


def window_feasible(design: SystemDesign, window: OutageWindow, inputs: SiteInputs, tb: TimeBase) -> bool:
    """True if ``design`` serves the load through the whole window."""
    window.validate(tb)
    return simulate_outage(window.start, inputs, design, tb, max_steps=window.duration_steps) >= window.duration_steps


def size_system(spec: SizingSpec, window: OutageWindow, inputs: SiteInputs, tb: TimeBase) -> SizingResult:
    """Cheapest feasible grid combination, or an infeasible result.

    Candidates are checked in order of (cost, pv_kw, storage_kwh,
    storage_kw, gen_kw), so the first feasible one is the answer and the
    rest of the grid need not be simulated.
    """
    window.validate(tb)
    inputs.check(tb)
    ranked = sorted(
        spec.candidates(),
        key=lambda s: (spec.cost(s),) + tuple(s[k] for k in TIE_BREAK),
    )
    for n, sizes in enumerate(ranked, 1):
        try:
            design = spec.base.with_sizes(**sizes)
        except InvalidInputError as exc:
            raise ResilError(f"base design rejects candidate {sizes}: {exc}") from exc
        if window_feasible(design, window, inputs, tb):
            return SizingResult(design, spec.cost(sizes), n)
    return SizingResult(None, None, len(ranked))

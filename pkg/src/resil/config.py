"""Run configuration: a flat ``key = value`` file plus command-line overrides."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from resil.dispatch import SiteInputs, SystemDesign
from resil.errors import ConfigError, ResilError
from resil.sizing import OutageWindow, SizingSpec, validate_grid
from resil.stats import COMPARATORS
from resil.timebase import TimeBase, is_leap_year, read_series_file

DESIGN_KEYS = (
    "pv_kw",
    "wind_kw",
    "storage_kw",
    "storage_kwh",
    "soc_min_frac",
    "charge_eff",
    "discharge_eff",
    "gen_kw",
    "fuel_available_gal",
    "fuel_slope_gal_per_kwh",
    "fuel_intercept_gal_per_hr",
    "min_turndown_frac",
)
GRID_KEYS = ("pv_kw_grid", "storage_kw_grid", "storage_kwh_grid", "gen_kw_grid")
COST_KEYS = ("cost_per_pv_kw", "cost_per_storage_kw", "cost_per_storage_kwh", "cost_per_gen_kw")
PATH_KEYS = ("load_file", "pv_factor_file", "wind_factor_file", "soc_file", "r_file", "output_dir")


def _float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {raw!r}") from None


def _int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {raw!r}") from None


def _bool(key, raw):
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(key, f"expected true/false, got {raw!r}")


def _floats(key, raw):
    items = [s for s in raw.replace(";", ",").split(",") if s.strip()]
    return tuple(_float(key, s) for s in items)


def _str(key, raw):
    return raw


KEYS: dict[str, Callable] = {
    "load_file": _str,
    "pv_factor_file": _str,
    "wind_factor_file": _str,
    "soc_file": _str,
    "r_file": _str,
    "output_dir": _str,
    "steps_per_hour": _int,
    "year": _int,
    "critical_load_fraction": _float,
    "allow_factor_above_one": _bool,
    "outage_start_step": _int,
    "outage_duration_steps": _int,
    "survival_comparator": _str,
    "prob_durations": _floats,
    "threads": _int,
    **{k: _float for k in DESIGN_KEYS},
    **{k: _floats for k in GRID_KEYS},
    **{k: _float for k in COST_KEYS},
}


def parse_config_text(text: str) -> dict[str, str]:
    """Raw ``key -> value`` strings. ``#`` starts a comment at line start or after whitespace."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        for marker in (" #", "\t#"):
            if marker in line:
                line = line[: line.index(marker)].rstrip()
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown configuration key")
        if key in out:
            raise ConfigError(key, "given more than once")
        out[key] = value
    return out


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    @classmethod
    def from_sources(
        cls,
        config_path: Optional[os.PathLike],
        overrides: Optional[dict[str, str]] = None,
    ) -> RunConfig:
        """Merge a config file with string overrides and convert types.

        Relative paths in the file are resolved against the file's directory;
        relative paths given as overrides against the working directory.
        """
        raw: dict[str, tuple[str, Path]] = {}
        if config_path is not None:
            path = Path(config_path)
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
            for k, v in parse_config_text(text).items():
                raw[k] = (v, path.parent)
        for k, v in (overrides or {}).items():
            if k not in KEYS:
                raise ConfigError(k, "unknown configuration key")
            raw[k] = (v, Path.cwd())

        values = {}
        for k, (v, base) in raw.items():
            value = KEYS[k](k, v)
            if k in PATH_KEYS and value:
                value = str(base / value)
            values[k] = value
        cfg = cls(values)
        cfg._validate()
        return cfg

    def get(self, key, default=None):
        return self.values.get(key, default)

    def require(self, key):
        if key not in self.values:
            raise ConfigError(key, "required but not set")
        return self.values[key]

    def _validate(self):
        year = self.get("year", 2017)
        if is_leap_year(year):
            raise ConfigError("year", f"{year} is a leap year; only 365-day years are supported")
        frac = self.get("critical_load_fraction", 1.0)
        if not 0 < frac <= 1:
            raise ConfigError("critical_load_fraction", f"must be in (0, 1], got {frac}")
        if self.comparator not in COMPARATORS:
            raise ConfigError("survival_comparator", f"must be one of {COMPARATORS}")
        if any(d <= 0 for d in self.prob_durations):
            raise ConfigError("prob_durations", "durations must be positive")
        threads = self.get("threads")
        if threads is not None and threads < 1:
            raise ConfigError("threads", "must be >= 1")
        self.timebase  # noqa: B018 - validates steps_per_hour

    @property
    def timebase(self) -> TimeBase:
        try:
            return TimeBase(self.get("steps_per_hour", 1))
        except ResilError as exc:
            raise ConfigError("steps_per_hour", str(exc)) from None

    @property
    def comparator(self) -> str:
        return self.get("survival_comparator", "strict")

    @property
    def prob_durations(self) -> tuple:
        return self.get("prob_durations", (24.0,))

    @property
    def output_dir(self) -> Path:
        return Path(self.get("output_dir", "."))

    @property
    def r_file(self) -> Path:
        return Path(self.get("r_file", self.output_dir / "r.csv"))

    def _series(self, key, unit):
        path = self.get(key)
        if path is None:
            return None
        try:
            return read_series_file(path, unit, self.timebase, self.get("allow_factor_above_one", False))
        except OSError as exc:
            raise ConfigError(key, f"cannot read {path}: {exc.strerror}") from None
        except ResilError as exc:
            raise ConfigError(key, str(exc)) from None

    def site_inputs(self) -> SiteInputs:
        """Series from disk with the critical-load fraction applied to the load."""
        tb = self.timebase
        load = self._series("load_file", "kW")
        if load is None:
            raise ConfigError("load_file", "required but not set")
        load = load.scaled(self.get("critical_load_fraction", 1.0))
        return SiteInputs.build(
            tb,
            load,
            pv_factor=self._series("pv_factor_file", "factor"),
            wind_factor=self._series("wind_factor_file", "factor"),
            soc_frac=self._series("soc_file", "fraction"),
            allow_factor_above_one=self.get("allow_factor_above_one", False),
        )

    def design(self) -> SystemDesign:
        return _design({k: self.values[k] for k in DESIGN_KEYS if k in self.values})

    def window(self) -> OutageWindow:
        tb = self.timebase
        start = self.require("outage_start_step")
        duration = self.require("outage_duration_steps")
        if not 0 <= start < tb.ts:
            raise ConfigError("outage_start_step", f"must be in [0, {tb.ts})")
        if not 1 <= duration <= tb.ts:
            raise ConfigError("outage_duration_steps", f"must be in [1, {tb.ts}]")
        return OutageWindow(start, duration)

    def sizing_spec(self) -> SizingSpec:
        grids = {}
        for key in GRID_KEYS:
            try:
                grids[key[: -len("_grid")]] = validate_grid(key, self.require(key))
            except ResilError as exc:
                raise ConfigError(key, str(exc)) from None
        costs = {}
        for key in COST_KEYS:
            c = self.get(key, 0.0)
            if not math.isfinite(c) or c < 0:
                raise ConfigError(key, f"must be finite and >= 0, got {c}")
            costs[key] = c
        base = _design({k: v for k, v in self.values.items() if k in DESIGN_KEYS and k not in grids})
        return SizingSpec(**grids, **costs, base=base)


def _design(kwargs: dict) -> SystemDesign:
    try:
        return SystemDesign(**kwargs)
    except ResilError as exc:
        msg = str(exc)
        name = next((k for k in DESIGN_KEYS if msg.startswith(k + " ")), "design")
        raise ConfigError(name, msg) from None

"""Synthetic site data for demos and tests.

A retail-store-like load with a strong weekday/weekend split and a clear-sky
PV production factor. Both are deterministic unless a noise seed is given.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from resil.timebase import TimeBase

# Weekday load shape by hour of day, as a fraction of the weekday peak.
RETAIL_WEEKDAY_SHAPE = np.array([
    0.30, 0.30, 0.30, 0.30, 0.30, 0.32, 0.40, 0.60,
    0.85, 0.95, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00,
    1.00, 0.98, 0.95, 0.90, 0.75, 0.50, 0.35, 0.30,
])


def retail_load(
    tb: TimeBase,
    peak_kw: float = 200.0,
    weekend_ratio: float = 0.5,
    seasonal_swing: float = 0.2,
    noise: float = 0.0,
    seed: Optional[int] = None,
) -> np.ndarray:
    """Load in kW; weekend days (Sat, Sun) are ``weekend_ratio`` times weekdays.

    ``seasonal_swing`` scales load up in mid-summer and down in winter.
    ``noise`` adds multiplicative Gaussian noise with that standard deviation.
    """
    steps = np.arange(tb.ts)
    hour = (steps // tb.steps_per_hour) % 24
    day = steps // tb.steps_per_day
    weekday = day % 7  # 0 = Sunday
    load = peak_kw * RETAIL_WEEKDAY_SHAPE[hour]
    load = np.where((weekday == 0) | (weekday == 6), load * weekend_ratio, load)
    load = load * (1.0 + seasonal_swing * np.cos(2 * np.pi * (day - 196) / 365))
    if noise:
        rng = np.random.default_rng(seed)
        load = load * np.clip(1.0 + noise * rng.standard_normal(tb.ts), 0.0, None)
    return load


def clear_sky_pv_factor(
    tb: TimeBase,
    latitude_deg: float = 34.6,
    derate: float = 0.8,
    cloudiness: float = 0.0,
    seed: Optional[int] = None,
) -> np.ndarray:
    """PV output per kW-DC of a horizontal array under clear sky.

    Sun position uses the usual declination and hour-angle approximations,
    evaluated at the middle of each step in local solar time. ``cloudiness``
    randomly attenuates whole days by up to that fraction.
    """
    steps = np.arange(tb.ts)
    hours = (steps + 0.5) * tb.dt_hours
    day = (hours // 24).astype(int)
    solar_hour = hours % 24
    decl = np.radians(23.45) * np.sin(2 * np.pi * (284 + day + 1) / 365)
    hour_angle = np.radians(15.0 * (solar_hour - 12.0))
    lat = np.radians(latitude_deg)
    cos_zenith = np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.cos(hour_angle)
    factor = derate * np.clip(cos_zenith, 0.0, None)
    if cloudiness:
        rng = np.random.default_rng(seed)
        daily = 1.0 - cloudiness * rng.random(tb.days)
        factor = factor * daily[day]
    return factor

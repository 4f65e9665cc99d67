"""Independent reference implementations used to check the library.

These are written from the dispatch rules directly, with plain Python floats
and loops, and share no code with the package beyond its data classes.
"""

import itertools

import numpy as np

SLACK = 1e-9


def naive_survived(start, load, pv_factor, wind_factor, soc_frac, d, ts, dt, limit=None):
    """Steps survived by design ``d`` for an outage starting at ``start``."""
    limit = ts if limit is None else limit
    floor = d.soc_min_frac * d.storage_kwh
    frac = float(soc_frac[start])
    frac = max(frac, d.soc_min_frac)
    frac = min(frac, 1.0)
    soc = frac * d.storage_kwh
    fuel = d.fuel_available_gal

    def charge(soc, extra):
        if d.storage_kwh <= 0:
            return soc
        room = d.storage_kwh - soc
        if room < 0:
            room = 0.0
        p = min(extra, d.storage_kw, room / (d.charge_eff * dt))
        return min(soc + d.charge_eff * p * dt, d.storage_kwh)

    for k in range(limit):
        t = (start + k) % ts
        pv = d.pv_kw * float(pv_factor[t])
        wind = d.wind_kw * float(wind_factor[t])
        renewables = pv + wind
        remaining = float(load[t]) - renewables
        if remaining <= 0:
            soc = charge(soc, renewables - float(load[t]))
            continue
        if d.gen_kw > 0 and d.gen_kw >= remaining - SLACK:
            out = remaining
            if d.min_turndown_frac * d.gen_kw > out:
                out = d.min_turndown_frac * d.gen_kw
            burn = (d.fuel_slope_gal_per_kwh * out + d.fuel_intercept_gal_per_hr) * dt
            if fuel >= burn - SLACK:
                fuel = max(fuel - burn, 0.0)
                soc = charge(soc, out - remaining)
                continue
        if d.storage_kw > 0:
            can_give = min(d.storage_kw, max(soc - floor, 0.0) * d.discharge_eff / dt)
            if can_give >= remaining - SLACK:
                soc = max(soc - remaining * dt / d.discharge_eff, floor)
                continue
        return k
    return limit


def naive_year(load, pv_factor, wind_factor, soc_frac, d, ts, dt):
    return [naive_survived(j, load, pv_factor, wind_factor, soc_frac, d, ts, dt) for j in range(ts)]


def count_probability(hours, d, strict=True):
    """Share of entries exceeding (or, if not strict, reaching) ``d``."""
    n = 0
    for h in hours:
        if (h > d) if strict else (h >= d):
            n += 1
    return n / len(hours)


def count_curve(hours, length, strict=True):
    return [count_probability(hours, d, strict) for d in range(1, length + 1)]


def hour_groups(ts, steps_per_hour):
    groups = {h: [] for h in range(24)}
    for j in range(ts):
        groups[(j // steps_per_hour) % 24].append(j)
    return groups


def month_groups(ts, steps_per_hour):
    bounds = []
    day = 0
    for m, n in enumerate([31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31], 1):
        bounds.append((m, day, day + n))
        day += n
    groups = {m: [] for m in range(1, 13)}
    for j in range(ts):
        day = j // (24 * steps_per_hour)
        for m, lo, hi in bounds:
            if lo <= day < hi:
                groups[m].append(j)
                break
    return groups


def exhaustive_sizing(spec, window, inputs, tb):
    """Evaluate every grid combination; return (sizes, cost) of the best or None."""
    feasible = []
    for pv, skw, skwh, gen in itertools.product(spec.pv_kw, spec.storage_kw, spec.storage_kwh, spec.gen_kw):
        if skwh == 0 and skw > 0:
            continue
        d = spec.base.with_sizes(pv_kw=pv, storage_kw=skw, storage_kwh=skwh, gen_kw=gen)
        got = naive_survived(
            window.start,
            inputs.load.values,
            inputs.pv_factor.values,
            inputs.wind_factor.values,
            inputs.soc_frac.values,
            d,
            tb.ts,
            tb.dt_hours,
            limit=window.duration_steps,
        )
        if got >= window.duration_steps:
            cost = (
                spec.cost_per_pv_kw * pv
                + spec.cost_per_storage_kw * skw
                + spec.cost_per_storage_kwh * skwh
                + spec.cost_per_gen_kw * gen
            )
            feasible.append((cost, pv, skwh, skw, gen))
    if not feasible:
        return None
    cost, pv, skwh, skw, gen = min(feasible)
    return {"pv_kw": pv, "storage_kw": skw, "storage_kwh": skwh, "gen_kw": gen}, cost


def random_design(rng, SystemDesign):
    """A random design mixing zero and non-zero technologies."""
    has_batt = rng.random() < 0.75
    kwh = float(rng.uniform(5, 80)) if has_batt else 0.0
    return SystemDesign(
        pv_kw=float(rng.choice([0.0, rng.uniform(0, 40)])),
        wind_kw=float(rng.choice([0.0, rng.uniform(0, 20)])),
        storage_kw=float(rng.uniform(1, 30)) if has_batt else 0.0,
        storage_kwh=kwh,
        soc_min_frac=float(rng.choice([0.0, 0.2, rng.uniform(0, 0.5)])),
        charge_eff=float(rng.choice([1.0, rng.uniform(0.8, 1.0)])),
        discharge_eff=float(rng.choice([1.0, rng.uniform(0.8, 1.0)])),
        gen_kw=float(rng.choice([0.0, rng.uniform(2, 25)])),
        fuel_available_gal=float(rng.uniform(0, 20)),
        fuel_slope_gal_per_kwh=float(rng.uniform(0.05, 0.12)),
        fuel_intercept_gal_per_hr=float(rng.choice([0.0, rng.uniform(0, 0.5)])),
        min_turndown_frac=float(rng.choice([0.0, rng.uniform(0, 0.6)])),
    )


def random_series(rng, ts, steps_per_hour=1):
    """Load, PV factor, wind factor and SOC fraction for a toy year."""
    hours = (np.arange(ts) // steps_per_hour) % 24
    load = rng.uniform(0, 20, ts) * rng.choice([0.0, 1.0], ts, p=[0.1, 0.9])
    pv = np.where((hours >= 6) & (hours <= 18), rng.uniform(0, 1, ts), 0.0)
    wind = rng.uniform(0, 1, ts) * (rng.random() < 0.5)
    soc = rng.uniform(0, 1, ts)
    return load, pv, wind, soc

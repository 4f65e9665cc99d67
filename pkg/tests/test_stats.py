import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import count_curve, count_probability, hour_groups, month_groups
from resil.errors import EmptySubsetError, ResilError
from resil.stats import (
    aggregate,
    by_hour_csv,
    by_month_csv,
    curve_csv,
    probability_curve,
    r_max_hours,
    survival_probability,
)
from resil.sweep import SurvivalSeries
from resil.timebase import TimeBase

HOURLY = TimeBase()
THREE = [0, 1, 2]


def toy_series(values, days=1):
    tb = TimeBase(days=days)
    r = np.zeros(tb.ts, dtype=int)
    r[: len(values)] = values
    return SurvivalSeries(r, tb)


class TestSurvivalProbability:
    def test_three_start_example(self):
        s = toy_series([2, 2, 4])
        assert [survival_probability(s, d, THREE) for d in (1, 2, 3, 4)] == [1.0, 1 / 3, 1 / 3, 0.0]

    def test_inclusive_comparator(self):
        s = toy_series([2, 2, 4])
        got = [survival_probability(s, d, THREE, comparator="inclusive") for d in (1, 2, 3, 4, 5)]
        assert got == [1.0, 1.0, 1 / 3, 1 / 3, 0.0]

    def test_full_survival(self):
        s = SurvivalSeries(np.full(HOURLY.ts, HOURLY.ts), HOURLY)
        for d in (1, 24, 1000, 8759):
            assert survival_probability(s, d) == 1.0
        assert survival_probability(s, 8760) == 0.0

    def test_fractional_hours(self):
        tb = TimeBase(steps_per_hour=4, days=1)
        r = np.zeros(tb.ts, dtype=int)
        r[0] = 5  # 1.25 h
        s = SurvivalSeries(r, tb)
        assert survival_probability(s, 1, [0]) == 1.0
        assert survival_probability(s, 2, [0]) == 0.0
        assert r_max_hours(s, [0]) == 2

    def test_empty_subset(self):
        with pytest.raises(EmptySubsetError):
            survival_probability(toy_series([1]), 1, [])

    def test_bad_duration_and_comparator(self):
        with pytest.raises(ResilError):
            survival_probability(toy_series([1]), 0)
        with pytest.raises(ResilError):
            survival_probability(toy_series([1]), 1, comparator="loose")

    def test_boolean_subset(self):
        s = toy_series([2, 2, 4])
        mask = np.zeros(24, dtype=bool)
        mask[2] = True
        assert survival_probability(s, 3, mask) == 1.0


class TestProbabilityCurve:
    def test_three_start_example(self):
        c = probability_curve(toy_series([2, 2, 4]), THREE)
        assert c.p.tolist() == [1.0, 1 / 3, 1 / 3, 0.0]
        assert c.r_max_hours == 4
        assert c.durations.tolist() == [1, 2, 3, 4]

    def test_single_start(self):
        c = probability_curve(toy_series([5]), [0])
        assert c.p.tolist() == [1, 1, 1, 1, 0]
        assert c.at(5) == 0.0 and c.at(99) == 0.0

    def test_all_zero_is_empty(self):
        c = probability_curve(toy_series([]))
        assert c.r_max_hours == 0

    def test_full_year_random_matches_oracle(self):
        rng = np.random.default_rng(4)
        s = SurvivalSeries(rng.integers(0, 400, HOURLY.ts), HOURLY)
        c = probability_curve(s)
        assert c.p.tolist() == count_curve(s.hours.tolist(), c.r_max_hours)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda days: st.tuples(
            st.just(days),
            st.lists(st.integers(0, days * 24), min_size=days * 24, max_size=days * 24),
        )
    )
)
def test_curve_properties(arg):
    days, values = arg
    tb = TimeBase(days=days)
    s = SurvivalSeries(values, tb)
    c = probability_curve(s)
    if c.r_max_hours:
        assert np.all(np.diff(c.p) <= 0)
        assert c.p[-1] == 0
        assert np.all((c.p >= 0) & (c.p <= 1))
    assert c.p.tolist() == count_curve(values, c.r_max_hours)


class TestAggregate:
    def test_constant_r_rows_identical(self):
        s = SurvivalSeries(np.full(HOURLY.ts, 30), HOURLY)
        agg = aggregate(s)
        for row in agg.by_hour:
            assert row.tolist() == agg.overall.p.tolist()
        assert (agg.hour_counts == 365).all()
        assert agg.month_counts.tolist() == [d * 24 for d in (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)]

    def test_only_noon_starts_survive(self):
        r = np.where(HOURLY.hours_of_day() == 12, 10, 0)
        agg = aggregate(SurvivalSeries(r, HOURLY))
        assert agg.by_hour.shape == (24, 10)
        assert agg.by_hour[12].tolist() == [1.0] * 9 + [0.0]
        others = np.delete(agg.by_hour, 12, axis=0)
        assert not others.any()

    def test_hour_mean_equals_overall(self):
        rng = np.random.default_rng(8)
        s = SurvivalSeries(rng.integers(0, 200, HOURLY.ts), HOURLY)
        agg = aggregate(s)
        np.testing.assert_allclose(agg.by_hour.mean(axis=0), agg.overall.p, rtol=0, atol=1e-12)
        weights = agg.month_counts / HOURLY.ts
        np.testing.assert_allclose(weights @ agg.by_month, agg.overall.p, rtol=0, atol=1e-12)

    def test_truncated_year_has_empty_months(self):
        tb = TimeBase(days=2)
        agg = aggregate(SurvivalSeries(np.full(tb.ts, 3), tb))
        assert agg.month_counts.tolist() == [48] + [0] * 11
        assert not agg.by_month[1:].any()

    @pytest.mark.parametrize("sph", [1, 2])
    def test_matches_counting_oracle(self, sph):
        tb = TimeBase(steps_per_hour=sph)
        rng = np.random.default_rng(sph)
        s = SurvivalSeries(rng.integers(0, 100, tb.ts), tb)
        agg = aggregate(s)
        width = agg.overall.r_max_hours
        hours = s.hours.tolist()
        for h, idx in hour_groups(tb.ts, sph).items():
            assert agg.by_hour[h].tolist() == count_curve([hours[j] for j in idx], width)
        for m, idx in month_groups(tb.ts, sph).items():
            assert agg.by_month[m - 1].tolist() == count_curve([hours[j] for j in idx], width)


class TestCsv:
    def test_curve_csv(self):
        c = probability_curve(toy_series([2, 2, 4]), THREE)
        assert curve_csv(c) == (
            "duration_hours,probability\n1,1\n2,0.3333333333333333\n3,0.3333333333333333\n4,0\n"
        )

    def test_matrix_csv_shape(self):
        s = SurvivalSeries(np.full(HOURLY.ts, 3), HOURLY)
        agg = aggregate(s)
        rows = by_hour_csv(agg).splitlines()
        assert rows[0] == "hour_of_day,1,2,3"
        assert len(rows) == 25
        assert rows[1] == "0,1,1,0"
        months = by_month_csv(agg).splitlines()
        assert months[0] == "month,1,2,3" and months[-1] == "12,1,1,0"
        assert len(months) == 13


def test_oracle_probability_random():
    rng = np.random.default_rng(12)
    s = SurvivalSeries(rng.integers(0, 50, HOURLY.ts), HOURLY)
    hours = s.hours.tolist()
    subset = rng.choice(HOURLY.ts, 500, replace=False)
    for d in (1, 5, 17.5, 49, 60):
        assert survival_probability(s, d) == count_probability(hours, d)
        assert survival_probability(s, d, subset) == count_probability([hours[j] for j in subset], d)
        assert survival_probability(s, d, comparator="inclusive") == count_probability(hours, d, strict=False)

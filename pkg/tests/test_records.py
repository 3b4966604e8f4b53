import io
import logging
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from losscap import data_path
from losscap.exceptions import RecordParseError
from losscap.records import (
    QuarterRecord,
    derive_stats,
    load_records,
    parse_records,
    planner_inputs,
)

HEADER = "label,days_in_quarter,initial_patients,external_admissions,transfers_in,total_cared,discharged,deaths,hospital_days"


def test_bundled_file_parses(bundled_records):
    assert [r.label for r in bundled_records] == ["Q1", "Q2", "Q3"]
    assert [r.demands for r in bundled_records] == [425, 366, 429]
    assert all(not r.warnings for r in bundled_records)
    assert bundled_records[2].reported_occupancy_pct == 77.46


def test_load_records_from_path():
    assert load_records(data_path("surgery_quarters.csv"))[0].hospital_days == 3323


@pytest.mark.parametrize("sep", [",", ";", "\t"])
def test_delimiters(sep):
    text = HEADER.replace(",", sep) + "\n" + sep.join(["A", "90", "1", "2", "3", "6", "5", "1", "100"]) + "\n"
    (rec,) = parse_records(text)
    assert rec.total_cared == 6 and rec.label == "A"


def test_file_like_source():
    text = HEADER + "\nA,90,1,2,3,6,5,1,100\n"
    assert parse_records(io.StringIO(text))[0].deaths == 1


def test_blank_lines_skipped():
    text = HEADER + "\nA,90,1,2,3,6,5,1,100\n\n,,,,,,,,\n"
    assert len(parse_records(text)) == 1


def test_invariant_violation_is_a_warning(caplog):
    text = HEADER + "\nA,90,1,2,3,7,6,2,100\n"
    with caplog.at_level(logging.WARNING, logger="losscap.records"):
        (rec,) = parse_records(text)
    assert len(rec.warnings) == 2
    assert "total_cared" in caplog.text


@pytest.mark.parametrize(
    "text,match",
    [
        ("", "empty"),
        ("   \n", "empty"),
        (HEADER + "\n", "no data rows"),
        ("label,days_in_quarter\nA,90\n", "missing required columns"),
        (HEADER + "\nA,90,1,2,3,6,5,x,100\n", "not a number"),
        (HEADER + "\nA,90,1,2,3,6,5,1.5,100\n", "integer"),
        (HEADER + "\nA,90,1,2,3,6,5,-1,100\n", "nonnegative"),
        (HEADER + "\nA,0,1,2,3,6,5,1,100\n", "positive"),
        (HEADER + ",reported_occupancy_pct\nA,90,1,2,3,6,5,1,100,130\n", r"\[0, 100\]"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(RecordParseError, match=match):
        parse_records(text)


def test_integral_floats_accepted():
    (rec,) = parse_records(HEADER + "\nA,90.0,1,2,3,6,5,1,100\n")
    assert rec.days_in_quarter == 90 and isinstance(rec.days_in_quarter, int)


class TestDerivedStats:
    def test_first_quarter(self, bundled_records):
        s = derive_stats(bundled_records[0], 50)
        assert s.demands == 425
        assert s.deaths_per_cared_pct == pytest.approx(600 / 454)
        assert s.deaths_per_discharged_pct == pytest.approx(600 / 425)
        assert s.days_per_cared == pytest.approx(3323 / 454)
        assert s.global_mean_delay == pytest.approx(3323 / 425)
        assert s.computed_occupancy_pct == pytest.approx(100 * 3323 / 4550)
        assert s.reported_occupancy_pct == 76.08

    def test_zero_denominators(self):
        rec = QuarterRecord("Z", 90, 0, 0, 0, 0, 0, 0, 0)
        s = derive_stats(rec, 10)
        assert s.deaths_per_cared_pct is None
        assert s.deaths_per_discharged_pct is None
        assert s.days_per_cared is None and s.global_mean_delay is None
        assert s.computed_occupancy_pct == 0.0

    def test_as_dict(self, bundled_records):
        d = derive_stats(bundled_records[1], 50).as_dict()
        assert d["label"] == "Q2" and d["demands"] == 366

    @given(st.integers(1, 10_000), st.integers(0, 10_000), st.integers(1, 1000))
    def test_percentages_scale_free(self, cared, deaths, m):
        deaths = min(deaths, cared)
        a = derive_stats(QuarterRecord("a", 90, 0, cared, 0, cared, cared, deaths, 10), 5)
        b = derive_stats(QuarterRecord("b", 90, 0, cared * m, 0, cared * m, cared * m, deaths * m, 10), 5)
        assert a.deaths_per_cared_pct == pytest.approx(b.deaths_per_cared_pct, rel=1e-12, abs=1e-300)
        assert 0 <= a.deaths_per_cared_pct <= 100


class TestPlannerInputs:
    def test_bundled_window(self, bundled_records):
        p = planner_inputs(bundled_records, 50)
        assert p.total_hospital_days == 9743
        assert p.window_days == 274
        assert p.window_months == 9
        assert p.total_demands == 1220
        assert p.occupancy_source == "reported"
        assert p.weighted_mean_occupancy_pct == pytest.approx(
            (76.08 * 91 + 68.66 * 91 + 77.46 * 92) / 274
        )

    def test_computed_occupancy_fallback(self):
        recs = parse_records(HEADER + "\nA,100,0,1,0,1,1,0,500\nB,100,0,1,0,1,1,0,300\n")
        p = planner_inputs(recs, 10)
        assert p.occupancy_source == "computed"
        assert p.weighted_mean_occupancy_pct == pytest.approx(40.0)

    def test_empty(self):
        with pytest.raises(RecordParseError):
            planner_inputs([], 50)

    def test_permutation_invariant(self, bundled_records):
        base = planner_inputs(bundled_records, 50)
        rng = random.Random(3)
        for _ in range(6):
            shuffled = bundled_records[:]
            rng.shuffle(shuffled)
            p = planner_inputs(shuffled, 50)
            assert p.total_demands == base.total_demands
            assert p.total_hospital_days == base.total_hospital_days
            assert p.weighted_mean_occupancy_pct == pytest.approx(base.weighted_mean_occupancy_pct, rel=1e-14)

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from losscap.erlang import erlang_b, erlang_b_reference, estimate_rho_standard
from losscap.exceptions import ConfigError, InvalidStandardError
from losscap.planner import (
    BedSweepRow,
    LoadSweepRow,
    PlannerConfig,
    analyze,
    bed_reduction_sweep,
    expected_problem_cases,
    find_max_bed_reduction,
    find_max_load_factor,
    load_scaling_sweep,
    round_half_away,
    standardize,
)
from oracles import BED_SWEEP_ALPHA, LOAD_SWEEP_ALPHA, RHO_S


@pytest.fixture
def standard():
    return standardize(estimate_rho_standard(9743, 274))


class TestConfig:
    def test_defaults(self):
        cfg = PlannerConfig()
        assert cfg.servers == 50 and cfg.threshold_multiplier == 10
        assert cfg.effective_i_max == 49
        assert cfg.k_grid()[:5] == [1.0, 1.05, 1.1, 1.15, 1.2]
        assert cfg.k_grid()[-1] == 2.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"threshold_multiplier": 1.0},
            {"k_step": 0.0},
            {"k_step": 0.6},
            {"servers": 0},
            {"i_max": 51},
            {"k_max": 0.9},
            {"alpha_s_validity_cap": 1.5},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            PlannerConfig(**kwargs)

    def test_grid_has_no_drift(self):
        grid = PlannerConfig(k_step=0.1, k_max=3.0).k_grid()
        assert grid[2] == 1.2 and grid[-1] == 3.0 and len(grid) == 21


class TestStandardize:
    def test_bundled_standard(self, standard):
        assert standard.alpha_s == pytest.approx(BED_SWEEP_ALPHA[0], rel=1e-13)
        assert standard.alpha_s_valid

    def test_zero_intensity(self):
        s = standardize(0.0)
        assert s.alpha_s == 0.0 and s.alpha_s_valid

    def test_overloaded_flagged(self):
        s = standardize(60.0)
        assert s.alpha_s == pytest.approx(erlang_b_reference(50, 60.0), rel=1e-12)
        assert not s.alpha_s_valid

    def test_custom_cap(self):
        assert not standardize(RHO_S, PlannerConfig(alpha_s_validity_cap=0.004)).alpha_s_valid


class TestBedSweep:
    def test_rows_match_exact_values(self, standard):
        rows = bed_reduction_sweep(standard)
        assert len(rows) == 50
        for row, expected in zip(rows, BED_SWEEP_ALPHA):
            assert row.alpha == pytest.approx(expected, rel=1e-12)
            assert row.ratio == pytest.approx(expected / BED_SWEEP_ALPHA[0], rel=1e-12)

    def test_standard_row(self, standard):
        row = bed_reduction_sweep(standard)[0]
        assert row.ratio == 1.0 and row.alpha == standard.alpha_s and row.admissible

    def test_admissibility_boundary(self, standard):
        rows = bed_reduction_sweep(standard)
        assert rows[8].admissible and not rows[9].admissible

    def test_row_eight_against_oracle(self, standard):
        # printed table gives 3.57%; the exact value at 42 beds is 4.04%
        row = bed_reduction_sweep(standard)[8]
        assert row.alpha == pytest.approx(erlang_b_reference(42, RHO_S), rel=1e-12)
        assert row.alpha < 10 * standard.alpha_s

    def test_uses_erlang_b_directly(self, standard):
        for row in bed_reduction_sweep(standard):
            assert row.alpha == erlang_b(50 - row.i, RHO_S)

    def test_accepts_unstandardized_input(self):
        rows = bed_reduction_sweep(estimate_rho_standard(9743, 274))
        assert rows[0].alpha == pytest.approx(BED_SWEEP_ALPHA[0])


class TestLoadSweep:
    def test_rows_match_exact_values(self, standard):
        rows = load_scaling_sweep(standard, PlannerConfig(k_max=1.4))
        assert [r.k for r in rows] == [1.0, 1.05, 1.1, 1.15, 1.2, 1.25, 1.3, 1.35, 1.4]
        for row, expected in zip(rows, LOAD_SWEEP_ALPHA):
            assert row.alpha == pytest.approx(expected, rel=1e-12)

    def test_boundary(self, standard):
        rows = {r.k: r for r in load_scaling_sweep(standard)}
        assert rows[1.2].admissible and not rows[1.25].admissible
        assert rows[1.0].ratio == 1.0


class TestMaxima:
    def test_bundled_maxima(self, standard):
        assert find_max_bed_reduction(bed_reduction_sweep(standard)) == 8
        assert find_max_load_factor(load_scaling_sweep(standard)) == 1.2

    def test_huge_threshold(self, standard):
        cfg = PlannerConfig(threshold_multiplier=1e9)
        assert find_max_bed_reduction(bed_reduction_sweep(standard, cfg)) == cfg.effective_i_max
        assert find_max_load_factor(load_scaling_sweep(standard, cfg)) == cfg.k_max

    def test_threshold_barely_above_standard(self, standard):
        cfg = PlannerConfig(threshold_multiplier=1 + 1e-9)
        assert find_max_bed_reduction(bed_reduction_sweep(standard, cfg)) == 0
        assert find_max_load_factor(load_scaling_sweep(standard, cfg)) == 1.0

    def test_negligible_load(self):
        s = standardize(1e-6)
        assert find_max_load_factor(load_scaling_sweep(s)) == 2.0

    def test_inadmissible_standard_row(self):
        rows = [BedSweepRow(0, 5, 0.5, 1.0, False)]
        with pytest.raises(InvalidStandardError):
            find_max_bed_reduction(rows)
        with pytest.raises(InvalidStandardError):
            find_max_load_factor([LoadSweepRow(1.0, 1.0, 0.5, 1.0, False)])

    def test_first_violation_rule(self):
        rows = [BedSweepRow(0, 3, 0.1, 1, True), BedSweepRow(1, 2, 0.2, 2, False),
                BedSweepRow(2, 1, 0.1, 1, True)]
        assert find_max_bed_reduction(rows) == 0

    def test_empty(self):
        with pytest.raises(ValueError):
            find_max_bed_reduction([])

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.5, 45), st.floats(1.5, 50))
    def test_absolute_threshold_decides(self, rho, mult):
        # same cutoff expressed through a different standard bed count
        s = standardize(rho)
        rows = bed_reduction_sweep(s, PlannerConfig(threshold_multiplier=mult))
        limit = mult * s.alpha_s
        expected = 0
        for r in rows[1:]:
            if r.alpha < limit:
                expected = r.i
            else:
                break
        assert find_max_bed_reduction(rows) == expected


class TestSweepProperties:
    @settings(max_examples=80, deadline=None)
    @given(st.floats(0.5, 60), st.integers(5, 80), st.floats(1.01, 100))
    def test_monotone_and_prefix(self, rho, servers, mult):
        cfg = PlannerConfig(servers=servers, threshold_multiplier=mult, alpha_s_validity_cap=1.0)
        s = standardize(rho, cfg)
        for rows, key in ((bed_reduction_sweep(s, cfg), "i"), (load_scaling_sweep(s, cfg), "k")):
            alphas = [r.alpha for r in rows]
            assert all(a < b for a, b in zip(alphas, alphas[1:]) if a > 1e-300)
            flags = [r.admissible for r in rows]
            # admissibility is a prefix property
            assert flags == sorted(flags, reverse=True)
            n_ok = sum(flags)
            if key == "i":
                assert find_max_bed_reduction(rows) == rows[n_ok - 1].i
            else:
                assert find_max_load_factor(rows) == rows[n_ok - 1].k


class TestExpectedProblems:
    def test_reduced_beds_with_printed_alpha(self):
        assert expected_problem_cases(1220, 0.0357, 9).as_tuple() == (44, 5)

    def test_increased_load_with_printed_alpha(self):
        assert expected_problem_cases(1464, 0.0354, 9).as_tuple() == (52, 6)

    def test_no_demands(self):
        assert expected_problem_cases(0, 0.3, 9).as_tuple() == (0, 0)

    def test_raw_values_kept(self):
        p = expected_problem_cases(1220, 0.0357, 9)
        assert p.expected_raw == pytest.approx(43.554)
        assert p.monthly_raw == pytest.approx(43.554 / 9)

    def test_rounding_half_away(self):
        assert round_half_away(43.5) == 44
        assert round_half_away(42.5) == 43
        assert round_half_away(2.4999) == 2


class TestAnalyze:
    def test_published_intensity(self):
        rep = analyze(35.5584, demands=1220, window_months=9)
        assert rep.max_bed_reduction == 8
        assert rep.effective_beds == 42
        assert rep.effective_capacity_fraction == 0.84
        assert rep.max_load_factor == 1.2
        assert rep.expected_problems_increased_load.demands == 1464
        assert rep.alpha_s_valid

    def test_records(self, bundled_records):
        rep = analyze(bundled_records)
        assert rep.demands == 1220 and rep.window_months == 9
        assert rep.standard.rho_s == pytest.approx(RHO_S, rel=1e-15)
        # exact alpha at 42 beds, not the printed 3.57%
        assert rep.expected_problems_reduced_beds.as_tuple() == (49, 5)
        assert rep.expected_problems_increased_load.as_tuple() == (51, 6)
        assert rep.effective_capacity_fraction * 50 == rep.effective_beds

    def test_zero_intensity(self):
        rep = analyze(0.0, demands=1220, window_months=9)
        assert rep.max_bed_reduction == rep.config.effective_i_max
        assert rep.max_load_factor == rep.config.k_max
        assert rep.expected_problems_reduced_beds.as_tuple() == (0, 0)
        assert rep.expected_problems_increased_load.as_tuple() == (0, 0)

    def test_single_bed_flagged(self):
        rep = analyze(1.0, PlannerConfig(servers=1), demands=10, window_months=3)
        assert rep.standard.alpha_s == 0.5 and not rep.alpha_s_valid

    def test_bare_intensity_needs_window(self):
        with pytest.raises(ConfigError):
            analyze(30.0, demands=10)

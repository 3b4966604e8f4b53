"""Capacity planning against a blocking-probability threshold.

The standard blocking ``alpha_s`` observed at the current bed count is
taken as "no losses in practice". The tolerable blocking is a multiple of
it (ten by default). Two sweeps then ask how many beds could be removed,
and how much the offered load could grow, before blocking reaches that
threshold.
"""

from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import List, Optional, Sequence, Union

from ._validation import check_count, check_probability, check_real
from .erlang import StandardIntensity, erlang_b, estimate_rho_standard
from .exceptions import ConfigError, InvalidStandardError


@dataclass(frozen=True)
class PlannerConfig:
    """Parameters of the planning method.

    ``i_max=None`` means ``servers - 1``, i.e. sweep down to a single bed.
    """

    servers: int = 50
    threshold_multiplier: float = 10.0
    alpha_s_validity_cap: float = 0.01
    k_step: float = 0.05
    i_max: Optional[int] = None
    k_max: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "servers", check_count(self.servers, "servers", minimum=1, error=ConfigError))
        mult = check_real(self.threshold_multiplier, "threshold_multiplier", error=ConfigError)
        if mult <= 1:
            raise ConfigError(f"threshold_multiplier must be > 1, got {mult}")
        object.__setattr__(self, "threshold_multiplier", mult)
        object.__setattr__(
            self, "alpha_s_validity_cap",
            check_probability(self.alpha_s_validity_cap, "alpha_s_validity_cap", error=ConfigError),
        )
        step = check_real(self.k_step, "k_step", error=ConfigError)
        if not 0 < step <= 0.5:
            raise ConfigError(f"k_step must lie in (0, 0.5], got {step}")
        object.__setattr__(self, "k_step", step)
        if self.i_max is not None:
            i_max = check_count(self.i_max, "i_max", error=ConfigError)
            if i_max > self.servers:
                raise ConfigError(f"i_max={i_max} exceeds servers={self.servers}")
            object.__setattr__(self, "i_max", i_max)
        k_max = check_real(self.k_max, "k_max", error=ConfigError)
        if k_max < 1:
            raise ConfigError(f"k_max must be >= 1, got {k_max}")
        object.__setattr__(self, "k_max", k_max)

    @property
    def effective_i_max(self):
        return self.servers - 1 if self.i_max is None else self.i_max

    def k_grid(self):
        """Load multipliers 1, 1+step, ... up to ``k_max``, free of accumulation drift."""
        grid = []
        j = 0
        while True:
            k = round(1.0 + j * self.k_step, 12)
            if k > self.k_max + 1e-12:
                break
            grid.append(k)
            j += 1
        return grid


@dataclass(frozen=True)
class BedSweepRow:
    i: int
    servers: int
    alpha: float
    ratio: float
    admissible: bool


@dataclass(frozen=True)
class LoadSweepRow:
    k: float
    rho: float
    alpha: float
    ratio: float
    admissible: bool


@dataclass(frozen=True)
class ProblemCases:
    """Expected number of blocked demands over an observation window."""

    demands: int
    alpha: float
    window_months: float
    expected_raw: float
    monthly_raw: float

    @property
    def expected_count(self):
        return round_half_away(self.expected_raw)

    @property
    def monthly_mean(self):
        return round_half_away(self.monthly_raw)

    def as_tuple(self):
        return (self.expected_count, self.monthly_mean)


@dataclass(frozen=True)
class AnalysisReport:
    config: PlannerConfig
    standard: StandardIntensity
    bed_sweep: List[BedSweepRow]
    load_sweep: List[LoadSweepRow]
    max_bed_reduction: int
    effective_beds: int
    effective_capacity_fraction: float
    max_load_factor: float
    demands: int
    window_months: float
    expected_problems_reduced_beds: ProblemCases
    expected_problems_increased_load: ProblemCases
    extras: dict = field(default_factory=dict)

    @property
    def alpha_s_valid(self):
        return bool(self.standard.alpha_s_valid)

    @property
    def threshold(self):
        return self.config.threshold_multiplier * self.standard.alpha_s


def round_half_away(x):
    """Round to the nearest integer, ties away from zero (43.5 -> 44)."""
    return int(Decimal(repr(float(x))).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def _ratio(alpha, alpha_ref):
    if alpha_ref > 0:
        return alpha / alpha_ref
    return 1.0 if alpha == 0 else float("inf")


def _admissible(alpha, alpha_ref, threshold):
    # With alpha_ref == 0 the strict test 0 < 0 would reject the standard itself;
    # blocking no worse than the standard is always acceptable.
    return alpha < threshold or alpha <= alpha_ref


def standardize(standard, config=None):
    """Attach ``alpha_s = erlang_b(servers, rho_s)`` and its validity flag."""
    config = config or PlannerConfig()
    if not isinstance(standard, StandardIntensity):
        rho = check_real(standard, "rho_s", minimum=0.0)
        standard = StandardIntensity(rho_s=rho, source_days=0, source_hospital_days=0.0)
    alpha_s = erlang_b(config.servers, standard.rho_s)
    return replace(standard, alpha_s=alpha_s, alpha_s_valid=alpha_s <= config.alpha_s_validity_cap)


def _require_standardized(standard, config):
    if not isinstance(standard, StandardIntensity) or not standard.is_standardized:
        return standardize(standard, config)
    return standard


def bed_reduction_sweep(standard, config=None):
    """Blocking with ``servers - i`` beds for ``i = 0 .. i_max``."""
    config = config or PlannerConfig()
    standard = _require_standardized(standard, config)
    alpha0 = standard.alpha_s
    threshold = config.threshold_multiplier * alpha0
    rows = []
    for i in range(config.effective_i_max + 1):
        alpha = alpha0 if i == 0 else erlang_b(config.servers - i, standard.rho_s)
        rows.append(BedSweepRow(i, config.servers - i, alpha, _ratio(alpha, alpha0),
                                _admissible(alpha, alpha0, threshold)))
    return rows


def load_scaling_sweep(standard, config=None):
    """Blocking at the full bed count with offered load ``k * rho_s``."""
    config = config or PlannerConfig()
    standard = _require_standardized(standard, config)
    alpha1 = standard.alpha_s
    threshold = config.threshold_multiplier * alpha1
    rows = []
    for k in config.k_grid():
        rho = standard.rho_s if k == 1.0 else k * standard.rho_s
        alpha = alpha1 if k == 1.0 else erlang_b(config.servers, rho)
        rows.append(LoadSweepRow(k, rho, alpha, _ratio(alpha, alpha1),
                                 _admissible(alpha, alpha1, threshold)))
    return rows


def _last_admissible_prefix(rows):
    if not rows:
        raise ValueError("sweep is empty")
    if not rows[0].admissible:
        raise InvalidStandardError("the standard row itself is inadmissible")
    last = rows[0]
    for row in rows[1:]:
        if not row.admissible:
            break
        last = row
    return last


def find_max_bed_reduction(sweep: Sequence[BedSweepRow]) -> int:
    """Largest ``i`` such that rows ``0..i`` are all admissible."""
    if sweep and sweep[0].i != 0:
        raise ValueError("bed sweep must start at i=0")
    return _last_admissible_prefix(sweep).i


def find_max_load_factor(sweep: Sequence[LoadSweepRow]) -> float:
    """Largest grid ``k`` such that every row up to ``k`` is admissible."""
    if sweep and sweep[0].k != 1.0:
        raise ValueError("load sweep must start at k=1")
    return _last_admissible_prefix(sweep).k


def expected_problem_cases(demands, alpha, window_months):
    """Expected blocked demands, total and per month.

    The integer views round half away from zero; raw values are kept.
    """
    demands = check_count(demands, "demands")
    alpha = check_probability(alpha, "alpha")
    months = check_real(window_months, "window_months", minimum=0.0, strict=True)
    raw = demands * alpha
    return ProblemCases(demands, alpha, months, raw, raw / months)


def analyze(source: Union[Sequence, StandardIntensity, float], config=None, *,
            demands=None, window_months=None):
    """Run the whole planning procedure.

    Args:
        source: quarterly records (``losscap.records.QuarterRecord``), a
            :class:`StandardIntensity`, or a bare ``rho_s``.
        config: planner parameters, defaults to :class:`PlannerConfig`.
        demands: demand count over the window; taken from the records when
            ``source`` is a record list.
        window_months: observation window in months; three per record when
            derived from records.

    Returns:
        AnalysisReport. An invalid standard still yields a report, flagged
        through ``alpha_s_valid``; if even the standard row is inadmissible
        the maxima collapse to ``i*=0`` and ``k*=1``.
    """
    config = config or PlannerConfig()
    extras = {}
    if isinstance(source, (StandardIntensity, int, float)):
        standard = source
        if demands is None:
            demands = 0
        if window_months is None:
            raise ConfigError("window_months is required when analyzing a bare intensity")
    else:
        from .records import planner_inputs

        inputs = planner_inputs(source, config.servers)
        standard = estimate_rho_standard(inputs.total_hospital_days, inputs.window_days)
        demands = inputs.total_demands if demands is None else demands
        window_months = inputs.window_months if window_months is None else window_months
        extras["weighted_mean_occupancy_pct"] = inputs.weighted_mean_occupancy_pct
        extras["occupancy_source"] = inputs.occupancy_source

    standard = standardize(standard, config)
    bed = bed_reduction_sweep(standard, config)
    load = load_scaling_sweep(standard, config)

    try:
        i_star = find_max_bed_reduction(bed)
        k_star = find_max_load_factor(load)
    except InvalidStandardError:
        i_star, k_star = 0, 1.0
        extras["standard_row_inadmissible"] = True

    alpha_reduced = bed[i_star].alpha
    alpha_loaded = next(r.alpha for r in load if r.k == k_star)
    demands = check_count(demands, "demands")
    scaled_demands = round_half_away(k_star * demands)
    effective_beds = config.servers - i_star

    return AnalysisReport(
        config=config,
        standard=standard,
        bed_sweep=bed,
        load_sweep=load,
        max_bed_reduction=i_star,
        effective_beds=effective_beds,
        effective_capacity_fraction=effective_beds / config.servers,
        max_load_factor=k_star,
        demands=demands,
        window_months=float(window_months),
        expected_problems_reduced_beds=expected_problem_cases(demands, alpha_reduced, window_months),
        expected_problems_increased_load=expected_problem_cases(scaled_demands, alpha_loaded, window_months),
        extras=extras,
    )

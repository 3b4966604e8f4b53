"""Capacity analysis for finite-capacity stations modeled as Erlang loss systems."""

from importlib import resources

from .erlang import (
    LossStation,
    StandardIntensity,
    erlang_b,
    erlang_b_reference,
    estimate_rho_standard,
    traffic_intensity,
)
from .estimator import CapacityPlanner
from .network import solve_traffic, validate_routing
from .planner import (
    AnalysisReport,
    PlannerConfig,
    analyze,
    bed_reduction_sweep,
    expected_problem_cases,
    find_max_bed_reduction,
    find_max_load_factor,
    load_scaling_sweep,
    standardize,
)
from .records import QuarterRecord, derive_stats, parse_records, planner_inputs

__version__ = "0.1.0"


def data_path(name):
    """Path of a file bundled in ``losscap/data``."""
    return resources.files("losscap") / "data" / name


def load_example_records():
    """The bundled three-quarter surgery service dataset."""
    return parse_records(data_path("surgery_quarters.csv").read_text(encoding="utf-8"))


__all__ = [
    "AnalysisReport",
    "CapacityPlanner",
    "LossStation",
    "PlannerConfig",
    "QuarterRecord",
    "StandardIntensity",
    "analyze",
    "bed_reduction_sweep",
    "data_path",
    "derive_stats",
    "erlang_b",
    "erlang_b_reference",
    "estimate_rho_standard",
    "expected_problem_cases",
    "find_max_bed_reduction",
    "find_max_load_factor",
    "load_example_records",
    "load_scaling_sweep",
    "parse_records",
    "planner_inputs",
    "solve_traffic",
    "standardize",
    "traffic_intensity",
    "validate_routing",
]

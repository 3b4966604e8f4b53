"""Quarterly utilization records and the statistics derived from them."""

import csv
import io
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import List, Optional

from .exceptions import RecordParseError

logger = logging.getLogger(__name__)

INT_COLUMNS = (
    "days_in_quarter",
    "initial_patients",
    "external_admissions",
    "transfers_in",
    "total_cared",
    "discharged",
    "deaths",
    "hospital_days",
)
REQUIRED_COLUMNS = ("label",) + INT_COLUMNS
OPTIONAL_FLOAT_COLUMNS = ("reported_occupancy_pct", "cared_per_bed", "mean_inoccupation_per_bed")

MONTHS_PER_QUARTER = 3


@dataclass(frozen=True)
class QuarterRecord:
    """One quarter of movement data for a single service.

    ``cared_per_bed`` and ``mean_inoccupation_per_bed`` are carried through
    untouched; their definitions are not recoverable from the other fields.
    """

    label: str
    days_in_quarter: int
    initial_patients: int
    external_admissions: int
    transfers_in: int
    total_cared: int
    discharged: int
    deaths: int
    hospital_days: int
    reported_occupancy_pct: Optional[float] = None
    cared_per_bed: Optional[float] = None
    mean_inoccupation_per_bed: Optional[float] = None
    warnings: tuple = field(default=(), compare=False)

    @property
    def demands(self):
        return self.external_admissions + self.transfers_in

    def check(self):
        """Return invariant violations as human-readable strings."""
        problems = []
        composed = self.initial_patients + self.external_admissions + self.transfers_in
        if composed != self.total_cared:
            problems.append(
                f"{self.label}: total_cared={self.total_cared} but initial + admissions + transfers = {composed}"
            )
        if self.discharged + self.deaths > self.total_cared:
            problems.append(
                f"{self.label}: discharged + deaths = {self.discharged + self.deaths} exceeds total_cared={self.total_cared}"
            )
        return problems


@dataclass(frozen=True)
class DerivedStats:
    """Ratios computed from one record; ``None`` where a denominator is zero."""

    label: str
    demands: int
    deaths_per_cared_pct: Optional[float]
    deaths_per_discharged_pct: Optional[float]
    days_per_cared: Optional[float]
    global_mean_delay: Optional[float]
    computed_occupancy_pct: Optional[float]
    reported_occupancy_pct: Optional[float] = None

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class PlannerInputs:
    total_hospital_days: int
    window_days: int
    window_months: float
    total_demands: int
    weighted_mean_occupancy_pct: Optional[float]
    occupancy_source: str


def _parse_int(raw, column, row_no):
    text = (raw or "").strip()
    try:
        value = int(text)
    except ValueError:
        try:
            as_float = float(text)
        except ValueError:
            raise RecordParseError(f"row {row_no}: {column}={raw!r} is not a number") from None
        if not as_float.is_integer():
            raise RecordParseError(f"row {row_no}: {column}={raw!r} must be an integer")
        value = int(as_float)
    if value < 0:
        raise RecordParseError(f"row {row_no}: {column}={value} must be nonnegative")
    return value


def _parse_float(raw, column, row_no):
    text = (raw or "").strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise RecordParseError(f"row {row_no}: {column}={raw!r} is not a number") from None


def parse_records(source) -> List[QuarterRecord]:
    """Parse delimiter-separated quarterly records.

    ``source`` is the text itself or a file-like object. The delimiter is
    sniffed among comma, semicolon and tab. Invariant violations are logged
    and attached to the record as ``warnings``; they do not reject it.

    Raises:
        RecordParseError: empty input, missing required columns, or
            malformed numbers.
    """
    text = source.read() if hasattr(source, "read") else str(source)
    if not text.strip():
        raise RecordParseError("no records: input is empty")
    try:
        dialect = csv.Sniffer().sniff(text.splitlines()[0], delimiters=",;\t")
    except csv.Error:
        dialect = csv.excel
    reader = csv.DictReader(io.StringIO(text), dialect=dialect)
    header = [h.strip() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise RecordParseError(f"missing required columns: {', '.join(missing)}")

    records = []
    for row_no, row in enumerate(reader, start=2):
        if not any((v or "").strip() for v in row.values() if isinstance(v, str)):
            continue
        values = {c: _parse_int(row[c], c, row_no) for c in INT_COLUMNS}
        if values["days_in_quarter"] < 1:
            raise RecordParseError(f"row {row_no}: days_in_quarter must be positive")
        extra = {c: _parse_float(row.get(c), c, row_no) for c in OPTIONAL_FLOAT_COLUMNS if c in header}
        occ = extra.get("reported_occupancy_pct")
        if occ is not None and not 0 <= occ <= 100:
            raise RecordParseError(f"row {row_no}: reported_occupancy_pct={occ} outside [0, 100]")
        record = QuarterRecord(label=row["label"].strip(), **values, **extra)
        problems = record.check()
        for p in problems:
            logger.warning(p)
        records.append(QuarterRecord(**{**_fields_of(record), "warnings": tuple(problems)}))
    if not records:
        raise RecordParseError("no records: header present but no data rows")
    return records


def _fields_of(record):
    return {f.name: getattr(record, f.name) for f in fields(record)}


def load_records(path) -> List[QuarterRecord]:
    return parse_records(Path(path).read_text(encoding="utf-8"))


def _pct(num, den):
    return 100.0 * num / den if den > 0 else None


def derive_stats(record: QuarterRecord, beds: int) -> DerivedStats:
    return DerivedStats(
        label=record.label,
        demands=record.demands,
        deaths_per_cared_pct=_pct(record.deaths, record.total_cared),
        deaths_per_discharged_pct=_pct(record.deaths, record.discharged),
        days_per_cared=record.hospital_days / record.total_cared if record.total_cared else None,
        global_mean_delay=record.hospital_days / record.discharged if record.discharged else None,
        computed_occupancy_pct=_pct(record.hospital_days, beds * record.days_in_quarter),
        reported_occupancy_pct=record.reported_occupancy_pct,
    )


def planner_inputs(records, beds) -> PlannerInputs:
    """Aggregate records into the planner's inputs.

    The weighted mean occupancy weights each quarter by its length in days.
    Reported occupancy is used when every record carries it; otherwise the
    occupancy computed from bed-days is used, and ``occupancy_source`` says
    which.
    """
    records = list(records)
    if not records:
        raise RecordParseError("planner_inputs needs at least one record")
    total_days = sum(r.days_in_quarter for r in records)
    if all(r.reported_occupancy_pct is not None for r in records):
        occ = [r.reported_occupancy_pct for r in records]
        source = "reported"
    else:
        occ = [derive_stats(r, beds).computed_occupancy_pct for r in records]
        source = "computed"
    weighted = sum(o * r.days_in_quarter for o, r in zip(occ, records)) / total_days
    return PlannerInputs(
        total_hospital_days=sum(r.hospital_days for r in records),
        window_days=total_days,
        window_months=float(MONTHS_PER_QUARTER * len(records)),
        total_demands=sum(r.demands for r in records),
        weighted_mean_occupancy_pct=weighted,
        occupancy_source=source,
    )

"""Serialization of results: structured documents, CSV tables, text tables.

Every renderer works from the same plain-``dict`` document, so the three
output formats always describe identical numbers. Structured output keeps
full precision; text tables round percentages and ratios to 2 decimals.
"""

import csv
import io
import json
import math
from dataclasses import asdict

FORMATS = ("table", "json", "csv")


def pct(value, digits=2):
    """Format a probability as a percentage string, e.g. ``0.0042 -> '0.42%'``."""
    return f"{100.0 * value:.{digits}f}%"


def _num(x):
    # JSON has no infinity; ratios against a zero standard are the only source.
    if isinstance(x, float) and math.isinf(x):
        return None
    return x


def _problems_doc(p):
    return {
        "demands": p.demands,
        "alpha": p.alpha,
        "window_months": p.window_months,
        "expected_raw": p.expected_raw,
        "monthly_raw": p.monthly_raw,
        "expected_count": p.expected_count,
        "monthly_mean": p.monthly_mean,
    }


def bed_rows_doc(rows):
    return [
        {"i": r.i, "servers": r.servers, "alpha": r.alpha, "ratio": _num(r.ratio), "admissible": r.admissible}
        for r in rows
    ]


def load_rows_doc(rows):
    return [
        {"k": r.k, "rho": r.rho, "alpha": r.alpha, "ratio": _num(r.ratio), "admissible": r.admissible}
        for r in rows
    ]


def standard_doc(standard):
    return {
        "rho_s": standard.rho_s,
        "alpha_s": standard.alpha_s,
        "alpha_s_valid": standard.alpha_s_valid,
        "source_days": standard.source_days,
        "source_hospital_days": standard.source_hospital_days,
    }


def config_doc(config):
    doc = asdict(config)
    doc["i_max"] = config.effective_i_max
    return doc


def analysis_document(report):
    summary = {
        "max_bed_reduction": report.max_bed_reduction,
        "effective_beds": report.effective_beds,
        "effective_capacity_fraction": report.effective_capacity_fraction,
        "max_load_factor": report.max_load_factor,
        "threshold": report.threshold,
        "alpha_s_valid": report.alpha_s_valid,
        "demands": report.demands,
        "window_months": report.window_months,
        "expected_problems_reduced_beds": _problems_doc(report.expected_problems_reduced_beds),
        "expected_problems_increased_load": _problems_doc(report.expected_problems_increased_load),
    }
    summary.update(report.extras)
    return {
        "kind": "analysis",
        "config": config_doc(report.config),
        "standard": standard_doc(report.standard),
        "bed_sweep": bed_rows_doc(report.bed_sweep),
        "load_sweep": load_rows_doc(report.load_sweep),
        "summary": summary,
    }


def to_json(doc):
    return json.dumps(doc, indent=2) + "\n"


def from_json(text):
    return json.loads(text)


def _ratio_text(ratio):
    return "inf" if ratio is None else f"{ratio:.2f}"


def _mark(admissible):
    return "yes" if admissible else "no"


def bed_table_text(doc_rows, multiplier, limit=None):
    rows = doc_rows if limit is None else doc_rows[:limit]
    lines = [f"{'i':>4} {'beds':>5} {'alpha_i':>8} {'ratio':>7}  {'<' + format(multiplier, 'g'):>5}"]
    for r in rows:
        lines.append(
            f"{r['i']:>4} {r['servers']:>5} {pct(r['alpha']):>8} {_ratio_text(r['ratio']):>7}  {_mark(r['admissible']):>5}"
        )
    return "\n".join(lines)


def load_table_text(doc_rows, multiplier, limit=None):
    rows = doc_rows if limit is None else doc_rows[:limit]
    lines = [f"{'k':>5} {'rho':>9} {'alpha_k':>8} {'ratio':>7}  {'<' + format(multiplier, 'g'):>5}"]
    for r in rows:
        lines.append(
            f"{r['k']:>5.2f} {r['rho']:>9.4f} {pct(r['alpha']):>8} {_ratio_text(r['ratio']):>7}  {_mark(r['admissible']):>5}"
        )
    return "\n".join(lines)


def analysis_table_text(doc, limit=None):
    cfg = doc["config"]
    std = doc["standard"]
    s = doc["summary"]
    mult = cfg["threshold_multiplier"]
    out = [
        f"standard intensity rho_s = {std['rho_s']:.8f} erlangs "
        f"({std['source_hospital_days']:g} bed-days over {std['source_days']} days)",
        f"standard blocking alpha_s = {pct(std['alpha_s'])} with {cfg['servers']} beds"
        + ("" if std["alpha_s_valid"] else f"  [INVALID: above cap {pct(cfg['alpha_s_validity_cap'])}]"),
        f"threshold = {mult:g} x alpha_s = {pct(s['threshold'])}",
        "",
        "bed reduction",
        bed_table_text(doc["bed_sweep"], mult, limit),
        "",
        "load scaling",
        load_table_text(doc["load_sweep"], mult, limit),
        "",
        "summary",
        f"  beds that can be removed   i* = {s['max_bed_reduction']}",
        f"  effective beds                = {s['effective_beds']} of {cfg['servers']}",
        f"  effective capacity            = {100 * s['effective_capacity_fraction']:.0f}%",
        f"  admissible load increase   k* = {s['max_load_factor']:.2f}",
    ]
    if "weighted_mean_occupancy_pct" in s:
        out.append(
            f"  weighted mean occupancy       = {s['weighted_mean_occupancy_pct']:.2f}% ({s['occupancy_source']})"
        )
    for key, what in (("expected_problems_reduced_beds", "with effective beds"),
                      ("expected_problems_increased_load", "with increased load")):
        p = s[key]
        out.append(
            f"  expected blocked demands {what}: {p['expected_count']} of {p['demands']} "
            f"(monthly mean {p['monthly_mean']}) at alpha = {pct(p['alpha'])}"
        )
    return "\n".join(out) + "\n"


def csv_table(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def bed_table_csv(doc_rows):
    return csv_table(
        ["i", "servers", "alpha", "alpha_pct", "ratio", "admissible"],
        [[r["i"], r["servers"], repr(r["alpha"]), f"{100 * r['alpha']:.2f}",
          _ratio_text(r["ratio"]), _mark(r["admissible"])] for r in doc_rows],
    )


def load_table_csv(doc_rows):
    return csv_table(
        ["k", "rho", "alpha", "alpha_pct", "ratio", "admissible"],
        [[f"{r['k']:.2f}", repr(r["rho"]), repr(r["alpha"]), f"{100 * r['alpha']:.2f}",
          _ratio_text(r["ratio"]), _mark(r["admissible"])] for r in doc_rows],
    )


def analysis_csv(doc):
    rows = [["bed", r["i"], repr(r["alpha"]), f"{100 * r['alpha']:.2f}", _ratio_text(r["ratio"]),
             _mark(r["admissible"])] for r in doc["bed_sweep"]]
    rows += [["load", f"{r['k']:.2f}", repr(r["alpha"]), f"{100 * r['alpha']:.2f}", _ratio_text(r["ratio"]),
              _mark(r["admissible"])] for r in doc["load_sweep"]]
    return csv_table(["table", "parameter", "alpha", "alpha_pct", "ratio", "admissible"], rows)


def key_value_csv(doc):
    """Flatten a (possibly nested) document into ``key,value`` rows."""
    rows = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        else:
            rows.append([prefix, repr(value) if isinstance(value, float) else value])

    walk("", doc)
    return csv_table(["key", "value"], rows)

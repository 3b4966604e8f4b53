"""Command-line interface.

Exit codes:
    0  success
    1  unexpected internal error
    2  usage error (bad flags)
    3  input error: unreadable or malformed data, scenario or network file
    4  analysis completed but the standard blocking exceeds its validity cap
    5  the network's traffic equations are unsolvable
"""

import argparse
import logging
import sys
from pathlib import Path

from . import data_path, report
from .erlang import erlang_b
from .exceptions import (
    ConfigError,
    DomainError,
    InvalidRoutingError,
    LossCapError,
    RecordParseError,
    UnsolvableNetworkError,
)
from .network import load_network
from .planner import PlannerConfig, analyze, bed_reduction_sweep, load_scaling_sweep, standardize
from .records import derive_stats, load_records, planner_inputs

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_ALPHA_INVALID = 4
EXIT_UNSOLVABLE = 5

DEFAULT_DATA = "surgery_quarters.csv"

log = logging.getLogger("losscap")


def _add_format(p):
    p.add_argument("--format", choices=report.FORMATS, default="table")
    p.add_argument("--output", "-o", metavar="PATH", help="write to PATH instead of stdout")


def _add_planner_flags(p):
    p.add_argument("--beds", type=int, default=50, help="server (bed) count, default 50")
    p.add_argument("--threshold-multiplier", type=float, default=10.0,
                   help="admissible blocking as a multiple of alpha_s, default 10")
    p.add_argument("--alpha-cap", type=float, default=0.01,
                   help="largest alpha_s for which the standard is trusted, default 0.01")
    p.add_argument("--k-step", type=float, default=0.05)
    p.add_argument("--k-max", type=float, default=2.0)
    p.add_argument("--i-max", type=int, default=None, help="default: beds - 1")


def _add_intensity_source(p):
    p.add_argument("data_file", nargs="?", help="quarterly records CSV (default: bundled dataset)")
    p.add_argument("--rho-s", type=float, help="use this standard intensity instead of a data file")


def build_parser():
    parser = argparse.ArgumentParser(prog="losscap", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full planning analysis from quarterly records")
    p.add_argument("data_file", nargs="?", help="quarterly records CSV (default: bundled dataset)")
    _add_planner_flags(p)
    p.add_argument("--table-rows", type=int, default=11,
                   help="rows per sweep in table output (structured output is complete)")
    _add_format(p)

    p = sub.add_parser("erlang", help="Erlang loss blocking probability")
    p.add_argument("servers", type=int)
    p.add_argument("rho", type=float)
    _add_format(p)

    for name, what in (("sweep-beds", "bed-reduction sweep"), ("sweep-load", "load-scaling sweep")):
        p = sub.add_parser(name, help=what)
        _add_intensity_source(p)
        _add_planner_flags(p)
        _add_format(p)

    p = sub.add_parser("stats", help="statistics derived from each quarterly record")
    p.add_argument("data_file", nargs="?")
    p.add_argument("--beds", type=int, default=50)
    _add_format(p)

    p = sub.add_parser("traffic", help="solve the traffic equations of a network file")
    p.add_argument("network_file")
    _add_format(p)

    p = sub.add_parser("simulate", help="simulate a scenario file and compare with Erlang B")
    p.add_argument("scenario_file")
    p.add_argument("--seed", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--horizon", type=int, help="offered customers per replication at the loss station")
    p.add_argument("--warmup", type=int)
    _add_format(p)
    return parser


def _emit(text, args):
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(args):
    return PlannerConfig(
        servers=args.beds,
        threshold_multiplier=args.threshold_multiplier,
        alpha_s_validity_cap=args.alpha_cap,
        k_step=args.k_step,
        i_max=args.i_max,
        k_max=args.k_max,
    )


def _records(path):
    if path is None:
        return load_records(data_path(DEFAULT_DATA))
    return load_records(path)


def cmd_analyze(args):
    result = analyze(_records(args.data_file), _config(args))
    doc = report.analysis_document(result)
    if args.format == "json":
        _emit(report.to_json(doc), args)
    elif args.format == "csv":
        _emit(report.analysis_csv(doc), args)
    else:
        _emit(report.analysis_table_text(doc, limit=args.table_rows), args)
    if not result.alpha_s_valid:
        log.warning("alpha_s = %s exceeds the validity cap; the no-loss hypothesis is doubtful",
                    report.pct(result.standard.alpha_s))
        return EXIT_ALPHA_INVALID
    return EXIT_OK


def cmd_erlang(args):
    alpha = erlang_b(args.servers, args.rho)
    doc = {"kind": "erlang_b", "servers": args.servers, "rho": args.rho, "alpha": alpha}
    if args.format == "json":
        _emit(report.to_json(doc), args)
    elif args.format == "csv":
        _emit(report.key_value_csv(doc), args)
    else:
        _emit(report.pct(alpha) + "\n", args)
    return EXIT_OK


def _standard_for_sweep(args, config):
    if args.rho_s is not None:
        return standardize(args.rho_s, config)
    from .erlang import estimate_rho_standard

    inputs = planner_inputs(_records(args.data_file), config.servers)
    return standardize(estimate_rho_standard(inputs.total_hospital_days, inputs.window_days), config)


def _cmd_sweep(args, which):
    config = _config(args)
    standard = _standard_for_sweep(args, config)
    if which == "beds":
        rows = report.bed_rows_doc(bed_reduction_sweep(standard, config))
        table, to_csv = report.bed_table_text, report.bed_table_csv
    else:
        rows = report.load_rows_doc(load_scaling_sweep(standard, config))
        table, to_csv = report.load_table_text, report.load_table_csv
    doc = {"kind": f"{which}_sweep", "config": report.config_doc(config),
           "standard": report.standard_doc(standard), "rows": rows}
    if args.format == "json":
        _emit(report.to_json(doc), args)
    elif args.format == "csv":
        _emit(to_csv(rows), args)
    else:
        _emit(table(rows, config.threshold_multiplier) + "\n", args)
    return EXIT_OK if standard.alpha_s_valid else EXIT_ALPHA_INVALID


def cmd_sweep_beds(args):
    return _cmd_sweep(args, "beds")


def cmd_sweep_load(args):
    return _cmd_sweep(args, "load")


def cmd_stats(args):
    records = _records(args.data_file)
    stats = [derive_stats(r, args.beds).as_dict() for r in records]
    inputs = planner_inputs(records, args.beds)
    doc = {
        "kind": "records",
        "beds": args.beds,
        "quarters": stats,
        "totals": {
            "hospital_days": inputs.total_hospital_days,
            "window_days": inputs.window_days,
            "window_months": inputs.window_months,
            "demands": inputs.total_demands,
            "weighted_mean_occupancy_pct": inputs.weighted_mean_occupancy_pct,
            "occupancy_source": inputs.occupancy_source,
        },
    }
    if args.format == "json":
        _emit(report.to_json(doc), args)
    elif args.format == "csv":
        cols = list(stats[0])
        rows = [[repr(s[c]) if isinstance(s[c], float) else ("" if s[c] is None else s[c]) for c in cols]
                for s in stats]
        _emit(report.csv_table(cols, rows), args)
    else:
        def f(x):
            return "-" if x is None else f"{x:.2f}"

        lines = [f"{'quarter':<8} {'demands':>7} {'death/cared%':>12} {'death/disch%':>12} "
                 f"{'days/cared':>10} {'mean delay':>10} {'occ calc%':>9} {'occ rep%':>8}"]
        for s in stats:
            lines.append(
                f"{s['label']:<8} {s['demands']:>7} {f(s['deaths_per_cared_pct']):>12} "
                f"{f(s['deaths_per_discharged_pct']):>12} {f(s['days_per_cared']):>10} "
                f"{f(s['global_mean_delay']):>10} {f(s['computed_occupancy_pct']):>9} "
                f"{f(s['reported_occupancy_pct']):>8}"
            )
        t = doc["totals"]
        lines.append(
            f"total: {t['hospital_days']} bed-days over {t['window_days']} days, {t['demands']} demands, "
            f"weighted mean occupancy {t['weighted_mean_occupancy_pct']:.2f}% ({t['occupancy_source']})"
        )
        _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


def cmd_traffic(args):
    desc = load_network(args.network_file)
    sol = desc.solve()
    stations = []
    for k, (st, gamma) in enumerate(zip(desc.stations, sol.as_list())):
        rho = gamma * st.mean_service
        entry = {"station": k, "gamma": gamma, "mean_service": st.mean_service, "rho": rho,
                 "servers": st.servers}
        if st.servers is not None:
            entry["erlang_b"] = erlang_b(st.servers, rho)
        stations.append(entry)
    doc = {"kind": "traffic", "name": desc.name, "gamma": sol.as_list(), "residual": sol.residual,
           "loss_station": desc.loss_station, "stations": stations}
    if args.format == "json":
        _emit(report.to_json(doc), args)
    elif args.format == "csv":
        _emit(report.csv_table(["station", "gamma", "mean_service", "rho", "servers", "erlang_b"],
                          [[s["station"], repr(s["gamma"]), repr(s["mean_service"]), repr(s["rho"]),
                            "" if s["servers"] is None else s["servers"],
                            repr(s["erlang_b"]) if "erlang_b" in s else ""] for s in stations]), args)
    else:
        lines = [f"{'station':>7} {'gamma':>12} {'rho':>10} {'servers':>8} {'erlang_b':>9}"]
        for s in stations:
            servers = "inf" if s["servers"] is None else str(s["servers"])
            eb = report.pct(s["erlang_b"]) if "erlang_b" in s else "-"
            lines.append(f"{s['station']:>7} {s['gamma']:>12.6f} {s['rho']:>10.4f} {servers:>8} {eb:>9}")
        lines.append(f"residual {sol.residual:.3e}")
        _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


def cmd_simulate(args):
    from .simulation import network_config_from_description, simulate_network

    desc = load_network(args.scenario_file)
    overrides = {k: v for k, v in (("seed", args.seed), ("replications", args.replications),
                                   ("horizon_arrivals", args.horizon),
                                   ("warmup_arrivals", args.warmup)) if v is not None}
    config = network_config_from_description(desc, **overrides)
    est = simulate_network(config)
    analytic = config.analytic_blocking()
    doc = {
        "kind": "simulation",
        "name": desc.name,
        "seed": config.seed,
        "replications": config.replications,
        "horizon_arrivals": config.horizon_arrivals,
        "warmup_arrivals": config.warmup_arrivals,
        "rho": config.rho,
        "analytic_blocking": analytic,
        "estimate": est.as_dict(),
        "p_hat_covers_analytic": est.covers(analytic),
        "time_full_covers_analytic": est.time_full_covers(analytic),
    }
    if args.format == "json":
        _emit(report.to_json(doc), args)
    elif args.format == "csv":
        _emit(report.key_value_csv(doc), args)
    else:
        lo, hi = est.ci
        flo, fhi = est.time_full_ci
        lines = [
            f"scenario: {desc.name}",
            f"offered load at loss station rho = {config.rho:.4f} erlangs, "
            f"{config.stations[config.loss_station][0]} servers",
            f"Erlang loss formula:         {report.pct(analytic, 4)}",
            f"blocked / offered (99% CI):  {report.pct(est.p_hat, 4)}  [{report.pct(lo, 4)}, {report.pct(hi, 4)}]",
            f"time fully occupied (99% CI): {report.pct(est.time_full, 4)}  [{report.pct(flo, 4)}, {report.pct(fhi, 4)}]",
            f"mean number in service:      {est.mean_in_service:.4f}",
            f"{config.replications} replications x {config.horizon_arrivals - config.warmup_arrivals} "
            f"counted arrivals, seed {config.seed}",
        ]
        _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "erlang": cmd_erlang,
    "sweep-beds": cmd_sweep_beds,
    "sweep-load": cmd_sweep_load,
    "stats": cmd_stats,
    "traffic": cmd_traffic,
    "simulate": cmd_simulate,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="losscap: %(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UnsolvableNetworkError as exc:
        log.error("%s", exc)
        return EXIT_UNSOLVABLE
    except (RecordParseError, ConfigError, DomainError, InvalidRoutingError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except LossCapError as exc:
        log.error("%s", exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands: products | discover | analyze | sweep | simulate | serve |
report. Data goes to stdout (or --out), diagnostics to stderr. Exit
codes: 0 success, 2 I/O / parse / configuration failure, 3 discovery
failure (capacity too small, no usable rates), 4 reducible chain.
Defaults reproduce the case-study configuration: capacity 100, batch 10,
threshold 70, hours.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from .analysis import NotIrreducible, WhatIfResult, what_if, what_if_sweep
from .ctmc import BatchExceedsCapacity, Ctmc, SupplyStrategy, enhance_with_supply
from .discovery import CapacityTooSmall, NoRates, discover_ctmc
from .eventlog import (
    EventLog,
    IngestionConfig,
    MalformedRow,
    MissingColumn,
    UnknownObject,
    extract_sublog,
    list_products,
    parse_log,
)
from .simulate import occupancy_of, sample_trajectory
from .units import TimeUnit

log = logging.getLogger("shelfwise")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DISCOVERY = 3
EXIT_REDUCIBLE = 4

SWEEP_DEFAULT_RATES = [0.25, 0.30, 0.35, 0.40]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shelfwise",
        description="Discover purchasing chains from transaction logs and analyze supply strategies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="CSV or JSON-lines transaction log")
        p.add_argument("--object-col", default="product")
        p.add_argument("--quantity-col", default="quantity")
        p.add_argument("--time-col", default="timestamp")
        p.add_argument("--time-format", default="%Y-%m-%d %H:%M:%S")
        p.add_argument("--id-col", default=None)
        p.add_argument("--client-col", default=None)
        p.add_argument("--attr-col", action="append", default=[],
                       help="extra column kept as an event attribute (repeatable)")
        p.add_argument("--unit", default="hours", choices=[u.value for u in TimeUnit])
        p.add_argument("--strict", action="store_true",
                       help="abort on the first malformed row instead of skipping")

    def add_chain_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--product", required=True)
        p.add_argument("--capacity", type=int, default=100)
        p.add_argument("--initial", type=int, default=None,
                       help="initial shelf quantity (default: capacity)")

    def add_strategy_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--batch", type=int, default=10)
        p.add_argument("--threshold", type=int, default=70,
                       help="waste threshold for the surplus metric")
        p.add_argument("--max-quantity", type=int, default=None,
                       help="undersupply cutoff (default: largest observed purchase)")

    p = sub.add_parser("products", help="list objects with event counts and time range")
    add_input_flags(p)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--out", default=None)

    p = sub.add_parser("discover", help="discover the purchasing chain for one product")
    add_input_flags(p)
    add_chain_flags(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("analyze", help="what-if analysis for a single supply rate")
    add_input_flags(p)
    add_chain_flags(p)
    add_strategy_flags(p)
    p.add_argument("--rate", type=float, action="append", required=True,
                   help="supply rate per time unit (exactly one)")
    p.add_argument("--format", choices=["json", "csv"], default="json",
                   help="csv emits the steady state as state,probability rows")
    p.add_argument("--out", default=None)

    p = sub.add_parser("sweep", help="what-if analysis across several supply rates")
    add_input_flags(p)
    add_chain_flags(p)
    add_strategy_flags(p)
    p.add_argument("--rate", type=float, action="append", default=None,
                   help=f"supply rate, repeatable (default: {SWEEP_DEFAULT_RATES})")
    p.add_argument("--format", choices=["json", "csv"], default="json",
                   help="csv emits one summary row per rate")
    p.add_argument("--out", default=None)

    p = sub.add_parser("simulate", help="sample a trajectory and its occupancy")
    add_input_flags(p)
    add_chain_flags(p)
    p.add_argument("--batch", type=int, default=10)
    p.add_argument("--rate", type=float, default=None,
                   help="supply rate; omit to simulate the raw purchasing chain")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--burn-in", type=float, default=None)
    p.add_argument("--out", required=True,
                   help="output prefix: writes <out>.trajectory.csv and <out>.occupancy.json")

    p = sub.add_parser("serve", help="run the HTTP service")
    add_input_flags(p)
    p.add_argument("--port", type=int, default=8775)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--cors-origin", default=None)

    p = sub.add_parser("report", help="run a sweep and write figures + CSVs to a directory")
    add_input_flags(p)
    add_chain_flags(p)
    add_strategy_flags(p)
    p.add_argument("--rate", type=float, action="append", default=None)
    p.add_argument("--out", required=True, help="report output directory")

    return parser


def ingestion_config(args) -> IngestionConfig:
    return IngestionConfig(
        object_col=args.object_col,
        quantity_col=args.quantity_col,
        time_col=args.time_col,
        time_format=args.time_format,
        unit=TimeUnit.parse(args.unit),
        id_col=args.id_col,
        client_col=args.client_col,
        attr_cols=tuple(args.attr_col),
    )


def load_log(args) -> EventLog:
    parsed = parse_log(args.input, ingestion_config(args), strict=args.strict)
    if parsed.skipped:
        log.warning("skipped %d malformed rows in %s", parsed.skipped, args.input)
    return parsed


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def dump_json(data) -> str:
    return json.dumps(data, indent=2)


def cmd_products(args) -> int:
    summaries = list_products(load_log(args))
    if args.format == "json":
        payload = [
            {"id": s.id, "count": s.count,
             "firstTs": s.first.isoformat(), "lastTs": s.last.isoformat()}
            for s in summaries
        ]
        emit(dump_json(payload), args.out)
    else:
        lines = ["id\tcount\tfirst\tlast"]
        lines += [f"{s.id}\t{s.count}\t{s.first.isoformat()}\t{s.last.isoformat()}"
                  for s in summaries]
        emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_discover(args) -> int:
    sublog = extract_sublog(load_log(args), args.product)
    chain, report = discover_ctmc(sublog, args.capacity, args.initial,
                                  TimeUnit.parse(args.unit))
    emit(dump_json({"report": report.to_json_dict(), "chain": chain.to_json_dict()}),
         args.out)
    return EXIT_OK


def _pi_csv(result: WhatIfResult) -> str:
    lines = ["state,probability"]
    lines += [f"{state},{float(p)!r}" for state, p in enumerate(result.steady.pi)]
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    if len(args.rate) != 1:
        raise ValueError("analyze takes exactly one --rate; use sweep for several")
    sublog = extract_sublog(load_log(args), args.product)
    result = what_if(sublog, capacity=args.capacity, batch=args.batch,
                     rate=args.rate[0], threshold=args.threshold,
                     max_quantity=args.max_quantity, unit=TimeUnit.parse(args.unit),
                     initial=args.initial)
    if args.format == "csv":
        emit(_pi_csv(result), args.out)
    else:
        emit(dump_json(result.to_json_dict()), args.out)
    return EXIT_OK


def _sweep_results(args) -> list[WhatIfResult]:
    rates = args.rate if args.rate else list(SWEEP_DEFAULT_RATES)
    sublog = extract_sublog(load_log(args), args.product)
    return what_if_sweep(sublog, capacity=args.capacity, batch=args.batch,
                         rates=rates, threshold=args.threshold,
                         max_quantity=args.max_quantity,
                         unit=TimeUnit.parse(args.unit), initial=args.initial)


def cmd_sweep(args) -> int:
    results = _sweep_results(args)
    if args.format == "csv":
        from .report import SUMMARY_COLUMNS, _fmt
        lines = [",".join(SUMMARY_COLUMNS)]
        for r in results:
            row = r.to_json_dict()
            lines.append(",".join(_fmt(row[col]) for col in SUMMARY_COLUMNS))
        emit("\n".join(lines), args.out)
    else:
        emit(dump_json([r.to_json_dict() for r in results]), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    sublog = extract_sublog(load_log(args), args.product)
    chain, _ = discover_ctmc(sublog, args.capacity, args.initial, TimeUnit.parse(args.unit))
    if args.rate:
        chain = enhance_with_supply(chain, SupplyStrategy(batch=args.batch, rate=args.rate))
    trajectory = sample_trajectory(chain, args.horizon, args.seed)
    burn_in = 0.01 * args.horizon if args.burn_in is None else args.burn_in
    occupancy = occupancy_of(trajectory, chain.n_states, burn_in)

    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    traj_path = prefix.with_name(prefix.name + ".trajectory.csv")
    with traj_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "state"])
        for t, s in zip(trajectory.times, trajectory.states):
            writer.writerow([repr(float(t)), int(s)])
    occ_path = prefix.with_name(prefix.name + ".occupancy.json")
    occ_path.write_text(dump_json({
        "pi": [float(p) for p in occupancy.fractions],
        "horizon": occupancy.horizon,
        "burnIn": occupancy.burn_in,
        "seed": occupancy.seed,
        "rng": occupancy.rng,
    }) + "\n", encoding="utf-8")
    log.info("wrote %s and %s", traj_path, occ_path)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(load_log(args), source_name=args.input, cors_origin=args.cors_origin)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report

    results = _sweep_results(args)
    written = write_report(results, Path(args.out), product=args.product)
    for path in written:
        print(path, file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "products": cmd_products,
    "discover": cmd_discover,
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "serve": cmd_serve,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("SHELFWISE_LOG_LEVEL", "WARNING").upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (MissingColumn, MalformedRow, UnknownObject, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapacityTooSmall, NoRates, BatchExceedsCapacity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCOVERY
    except NotIrreducible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REDUCIBLE


if __name__ == "__main__":
    sys.exit(main())

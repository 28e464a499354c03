"""Command-line entry point: ``fdrepair {repair,repair-range,inject,score,inspect}``.

Exit codes: 0 success, 1 bad input, 2 no repair within the budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

from fdrepair.conflicts import debug_dump, delta_p
from fdrepair.datarepair import RepairResult, repair_data_fds
from fdrepair.errors import RepairError
from fdrepair.evaluation import perturb_data, perturb_fds, score_repair, tau_from_relative
from fdrepair.fds import WEIGHT_KINDS, format_fds, make_weight, parse_fds
from fdrepair.multirepair import find_repairs_fds, materialize_frontier
from fdrepair.relation import VInstance, dump_csv, load_csv
from fdrepair.report import (
    frontier_report,
    repair_report,
    repair_table,
    scores_table,
    to_json,
)
from fdrepair.search import DEFAULT_K, SearchSpace

EXIT_OK, EXIT_INPUT, EXIT_EMPTY = 0, 1, 2

log = logging.getLogger("fdrepair")


def _add_io(p: argparse.ArgumentParser, *, fds: bool = True) -> None:
    p.add_argument("--data", required=True, help="input CSV file")
    if fds:
        p.add_argument("--fds", required=True, help="FD file, one 'A,B -> C' per line")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")


def _add_search(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weight", choices=WEIGHT_KINDS, default="distinct")
    p.add_argument("--heuristic-k", type=int, default=DEFAULT_K)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--timings", action="store_true", help="include wall-clock time in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdrepair", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("repair", help="repair FDs and data for one budget")
    _add_io(p)
    budget = p.add_mutually_exclusive_group(required=True)
    budget.add_argument("--tau", type=int, help="maximum number of changed cells")
    budget.add_argument("--tau-rel", type=float, help="budget as a fraction of delta_P(FDs, data)")
    _add_search(p)
    p.add_argument("--write-data", help="write the repaired instance as CSV")
    p.add_argument("--write-fds", help="write the repaired FDs, one per input FD")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("repair-range", help="enumerate distinct repairs over a budget range")
    _add_io(p)
    p.add_argument("--tau-min", type=int, default=0)
    p.add_argument("--tau-max", type=int, help="defaults to delta_P of the input FDs")
    _add_search(p)
    p.set_defaults(func=cmd_repair_range)

    p = sub.add_parser("inject", help="perturb clean data and FDs")
    _add_io(p)
    p.add_argument("--data-rate", type=float, default=0.0)
    p.add_argument("--fd-rate", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("score", help="score a repair against the clean ground truth")
    p.add_argument("--clean-data", required=True)
    p.add_argument("--dirty-data", required=True)
    p.add_argument("--repaired-data", required=True)
    p.add_argument("--clean-fds", required=True)
    p.add_argument("--dirty-fds", required=True)
    p.add_argument("--repaired-fds", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("inspect", help="dump the conflict graph and difference sets")
    _add_io(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_inspect)
    return parser


def _load(args, path: str, *, variables: bool = False) -> VInstance:
    return load_csv(
        path, header=not args.no_header, delimiter=args.delimiter, parse_variables=variables
    )


def _load_fds(path: str, instance: VInstance):
    return parse_fds(Path(path).read_text(encoding="utf-8"), instance.schema)


def _emit(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def cmd_repair(args, stdout: TextIO) -> int:
    instance = _load(args, args.data)
    fds = _load_fds(args.fds, instance)
    tau = args.tau if args.tau_rel is None else tau_from_relative(args.tau_rel, fds, instance)
    if tau < 0:
        raise ValueError("--tau must be non-negative")
    weight = make_weight(args.weight, instance)
    started = time.perf_counter()
    result = repair_data_fds(fds, instance, tau, weight, args.heuristic_k, args.seed)
    elapsed = time.perf_counter() - started
    log.info("search finished in %.3fs", elapsed)
    report = repair_report(
        result,
        fds,
        instance,
        weight=args.weight,
        k=args.heuristic_k,
        seed=args.seed,
        tau_rel=args.tau_rel,
        timing=elapsed if args.timings else None,
    )
    text = to_json(report) if args.format == "json" else repair_table(report)
    _emit(text, args.out, stdout)
    if not isinstance(result, RepairResult):
        print(f"fdrepair: {result.reason} (tau={tau})", file=sys.stderr)
        return EXIT_EMPTY
    if args.write_data:
        with open(args.write_data, "w", newline="", encoding="utf-8") as fh:
            dump_csv(result.instance_prime, fh, delimiter=args.delimiter)
    if args.write_fds:
        Path(args.write_fds).write_text(format_fds(result.sigma_prime, instance.schema), encoding="utf-8")
    return EXIT_OK


def cmd_repair_range(args, stdout: TextIO) -> int:
    instance = _load(args, args.data)
    fds = _load_fds(args.fds, instance)
    weight = make_weight(args.weight, instance)
    root = delta_p(fds, instance)
    tau_max = root if args.tau_max is None else args.tau_max
    if not 0 <= args.tau_min <= tau_max:
        raise ValueError("expected 0 <= --tau-min <= --tau-max")
    started = time.perf_counter()
    space = SearchSpace(instance, fds, weight, args.heuristic_k)
    swept = find_repairs_fds(fds, instance, args.tau_min, tau_max, weight, space=space)
    frontier = materialize_frontier(
        swept.points, fds, instance, tau_max, weight, seed=args.seed,
        stats=swept.stats, tau_low=args.tau_min, space=space,
    )
    elapsed = time.perf_counter() - started
    log.info("range sweep finished in %.3fs", elapsed)
    entries = frontier_report(
        frontier, fds, instance, root, weight=args.weight, k=args.heuristic_k,
        seed=args.seed, timing=elapsed if args.timings else None,
    )
    if args.format == "json":
        text = to_json(entries)
    else:
        text = "".join(
            f"== tau {e['tau_range'][0]}..{e['tau_range'][1]}\n" + repair_table(e["repair"])
            for e in entries
        )
    _emit(text, args.out, stdout)
    if not entries:
        print("fdrepair: no repair in the requested budget range", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_inject(args, stdout: TextIO) -> int:
    clean = _load(args, args.data)
    fds = _load_fds(args.fds, clean)
    fd_part = perturb_fds(fds, args.fd_rate, args.seed)
    data_part = perturb_data(clean, fds, args.data_rate, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "dirty.csv", "w", newline="", encoding="utf-8") as fh:
        dump_csv(data_part.instance, fh, delimiter=args.delimiter)
    (out / "dirty_fds.txt").write_text(format_fds(fd_part.fds, clean.schema), encoding="utf-8")
    schema = clean.schema
    truth = {
        "seed": args.seed,
        "data_rate": args.data_rate,
        "fd_rate": args.fd_rate,
        "requested_cells": data_part.requested,
        "shortfall": data_part.shortfall,
        "injected_cells": [
            [e.tuple_id, schema.attributes[e.attr], e.old, e.new] for e in data_part.injected
        ],
        "removed_lhs": [schema.names(r) for r in fd_part.removed],
    }
    (out / "truth.json").write_text(to_json(truth), encoding="utf-8")
    if data_part.shortfall:
        print(f"fdrepair: only {len(data_part.injected)} of {data_part.requested} cells injected",
              file=sys.stderr)
    return EXIT_OK


def cmd_score(args, stdout: TextIO) -> int:
    clean = _load(args, args.clean_data)
    dirty = _load(args, args.dirty_data)
    repaired = _load(args, args.repaired_data, variables=True)
    schema = clean.schema
    sets = [
        parse_fds(Path(p).read_text(encoding="utf-8"), schema)
        for p in (args.clean_fds, args.dirty_fds, args.repaired_fds)
    ]
    scores = score_repair(clean, dirty, repaired, *sets)
    text = to_json(scores.to_json()) if args.format == "json" else scores_table(scores)
    _emit(text, args.out, stdout)
    return EXIT_OK


def cmd_inspect(args, stdout: TextIO) -> int:
    instance = _load(args, args.data)
    fds = _load_fds(args.fds, instance)
    payload = debug_dump(instance, fds)
    payload["delta_p"] = delta_p(fds, instance)
    _emit(to_json(payload), args.out, stdout)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * args.verbose, format="%(name)s: %(message)s", stream=sys.stderr
    )
    try:
        return args.func(args, stdout or sys.stdout)
    except (RepairError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"fdrepair: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

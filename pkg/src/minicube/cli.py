"""Command-line interface.

Subcommands: ``repl`` (interactive exploration of one CSV), ``query``
(one-shot aggregate), ``serve`` (HTTP API), and ``bench`` (the 6-step
timing protocol).

Exit codes: 0 success, 2 usage error, 3 ingest error, 4 query error.

The REPL is scriptable: feed commands on stdin and the same script
against the same file produces byte-identical output (prompts are only
printed when stdin is a terminal).  Column names containing spaces are
quoted shell-style: ``drill "Subcategory Code"``.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys

from . import state as qs
from .bench import combine_reports, generate_synthetic, render_report_text, report_to_json, run_protocol
from .cube import Cube
from .display import render_aggregate, render_facts
from .engine import PARALLEL, SERIAL, ExecMode, evaluate, fact_table
from .errors import CubeError, EmptyInput, MalformedCsv, RaggedRow
from .ingest import load_csv_file
from .plot import build_plot, render_image
from .serialize import aggregate_to_json
from .server import ServerConfig, run_server
from .state import QueryState

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INGEST = 3
EXIT_QUERY = 4

_INGEST_ERRORS = (EmptyInput, RaggedRow, MalformedCsv)


def _load(path: str) -> Cube:
    return load_csv_file(path)


def _print_error(exc: Exception) -> None:
    name = exc.name if isinstance(exc, CubeError) else type(exc).__name__
    print(f"error: {name}: {exc}", file=sys.stderr)


# --- repl ---------------------------------------------------------------


class _ReplQuit(Exception):
    pass


def _one_arg(args: list[str], usage: str) -> str:
    if len(args) != 1:
        raise ValueError(f"usage: {usage}")
    return args[0]


def _two_args(args: list[str], usage: str) -> tuple[str, str]:
    if len(args) != 2:
        raise ValueError(f"usage: {usage}")
    return args[0], args[1]


def _repl_show(cube: Cube, state: QueryState | None) -> None:
    if state is None:
        print("error: no measure selected; use: measure <col>")
        return
    print(render_aggregate(evaluate(cube, state)), end="")


def _repl_dispatch(cube: Cube, state: QueryState | None, tokens: list[str]) -> QueryState | None:
    """Run one REPL command; returns the (possibly new) state.

    State-changing commands re-display the aggregate table afterwards.
    """
    cmd, args = tokens[0], tokens[1:]

    if cmd == "quit":
        raise _ReplQuit

    if cmd == "facts":
        offset = int(args[0]) if len(args) >= 1 else 0
        limit: int | str = "all" if len(args) >= 2 and args[1] == "all" else (
            int(args[1]) if len(args) >= 2 else 10
        )
        schema, rows, total = fact_table(cube, offset, limit)
        print(render_facts(schema, rows, total, offset), end="")
        return state

    if cmd == "show":
        _repl_show(cube, state)
        return state

    if cmd == "measure":
        col = _one_arg(args, "measure <col>")
        state = qs.new_state(cube, col) if state is None else qs.set_measure(cube, state, col)
        _repl_show(cube, state)
        return state

    if cmd == "plot":
        if len(args) == 5 and args[3] == "sorted":
            x, y, kind, _flag, path = args
            sort = True
        elif len(args) == 4:
            x, y, kind, path = args
            sort = False
        else:
            raise ValueError("usage: plot <x> <y> <kind> [sorted] <out.svg>")
        plot_state = state if state is not None else QueryState(measure="")
        spec = build_plot(cube, plot_state, x, y, kind, sort=sort)
        image = render_image(spec)
        with open(path, "wb") as fh:
            fh.write(image)
        print(f"wrote {path} ({len(spec.points)} points)")
        return state

    # Everything below mutates the query state.
    if state is None and cmd in ("drill", "undrill", "filter", "unfilter", "clearfilters"):
        print("error: no measure selected; use: measure <col>")
        return state

    if cmd == "drill":
        state = qs.drilldown_add(cube, state, _one_arg(args, "drill <col>"))
    elif cmd == "undrill":
        state = qs.drilldown_remove(cube, state, _one_arg(args, "undrill <col>"))
    elif cmd == "filter":
        col, value = _two_args(args, "filter <col> <value>")
        state = qs.filter_add(state, col, value)
    elif cmd == "unfilter":
        col, value = _two_args(args, "unfilter <col> <value>")
        state = qs.filter_remove(state, col, value)
    elif cmd == "clearfilters":
        if args:
            raise ValueError("usage: clearfilters")
        state = qs.filters_clear(state)
    else:
        print(f"error: unknown command {cmd!r}")
        return state

    _repl_show(cube, state)
    return state


def cmd_repl(args: argparse.Namespace) -> int:
    try:
        cube = _load(args.file)
    except (CubeError, OSError) as exc:
        _print_error(exc)
        return EXIT_INGEST

    print(f"loaded {cube.source_name}: {cube.row_count} rows, {cube.column_count} columns")
    measures = cube.measure_names()
    state: QueryState | None = None
    if measures:
        state = qs.new_state(cube, measures[0])
        _repl_show(cube, state)
    else:
        print("no measure columns detected; aggregate commands are unavailable")

    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            try:
                line = input("minicube> ")
            except EOFError:
                print()
                return EXIT_OK
        else:
            line = sys.stdin.readline()
            if line == "":
                return EXIT_OK
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            print(f"error: {exc}")
            continue
        if not tokens:
            continue
        try:
            state = _repl_dispatch(cube, state, tokens)
        except _ReplQuit:
            return EXIT_OK
        except CubeError as exc:
            print(f"error: {exc.name}: {exc}")
        except (ValueError, OSError) as exc:
            print(f"error: {exc}")


# --- query --------------------------------------------------------------


def cmd_query(args: argparse.Namespace) -> int:
    try:
        cube = _load(args.file)
    except (CubeError, OSError) as exc:
        _print_error(exc)
        return EXIT_INGEST

    try:
        state = qs.new_state(cube, args.measure)
        if args.drill:
            for col in args.drill.split(","):
                state = qs.drilldown_add(cube, state, col)
        for cut in args.cut or []:
            col, sep, value = cut.partition("=")
            if not sep:
                print(f"error: cut {cut!r} is not of the form col=value", file=sys.stderr)
                return EXIT_USAGE
            state = qs.filter_add(state, col, value)
        mode = SERIAL if args.mode == "serial" else PARALLEL
        table = evaluate(cube, state, mode)
    except CubeError as exc:
        _print_error(exc)
        return EXIT_QUERY

    if args.out == "json":
        print(json.dumps(aggregate_to_json(table), indent=2))
    else:
        print(render_aggregate(table), end="")
    return EXIT_OK


# --- serve --------------------------------------------------------------


def cmd_serve(args: argparse.Namespace) -> int:
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --bind must be host:port, got {args.bind!r}", file=sys.stderr)
        return EXIT_USAGE
    workers: int | str = args.workers
    if workers != "auto":
        try:
            workers = int(workers)
        except ValueError:
            print("error: --workers must be an integer or 'auto'", file=sys.stderr)
            return EXIT_USAGE
    config = ServerConfig(
        host=host,
        port=int(port_text),
        max_upload_bytes=args.max_upload_bytes,
        workers=workers,
        cors_origin=args.cors_origin,
        ui_dir=args.ui_dir,
    )
    try:
        run_server(config)
    except KeyboardInterrupt:
        pass
    return EXIT_OK


# --- bench --------------------------------------------------------------


def cmd_bench(args: argparse.Namespace) -> int:
    if args.file is None and args.synthetic_rows is None:
        print("error: bench needs a CSV file or --synthetic-rows", file=sys.stderr)
        return EXIT_USAGE
    if args.file is not None:
        try:
            cube = _load(args.file)
        except (CubeError, OSError) as exc:
            _print_error(exc)
            return EXIT_INGEST
    else:
        cube = generate_synthetic(args.synthetic_rows, args.seed)

    mode_map = {"serial": SERIAL, "parallel": PARALLEL}
    mode_names = [m.strip() for m in args.modes.split(",") if m.strip()]
    if not mode_names or any(m not in mode_map for m in mode_names):
        print(f"error: --modes must name serial and/or parallel, got {args.modes!r}", file=sys.stderr)
        return EXIT_USAGE

    try:
        reports = [run_protocol(cube, mode_map[m], args.trials) for m in mode_names]
    except CubeError as exc:
        _print_error(exc)
        return EXIT_QUERY
    report = combine_reports(*reports)
    print(render_report_text(report), end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report_to_json(report), fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    return EXIT_OK


# --- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minicube",
        description="In-memory OLAP cube engine: explore CSV data by aggregating, drilling down, filtering and plotting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_repl = sub.add_parser("repl", help="interactive exploration of a CSV file")
    p_repl.add_argument("file", help="CSV file to load")
    p_repl.set_defaults(func=cmd_repl)

    p_query = sub.add_parser("query", help="one-shot aggregate query")
    p_query.add_argument("file", help="CSV file to load")
    p_query.add_argument("--measure", required=True, help="measure column to sum")
    p_query.add_argument("--drill", default="", help="comma-separated drill-down columns")
    p_query.add_argument(
        "--cut", action="append", metavar="COL=VALUE", help="filter (repeatable)"
    )
    p_query.add_argument("--mode", choices=("serial", "parallel"), default="serial")
    p_query.add_argument("--out", choices=("table", "json"), default="table")
    p_query.set_defaults(func=cmd_query)

    p_serve = sub.add_parser("serve", help="run the HTTP API server")
    p_serve.add_argument("--bind", default="127.0.0.1:4680", metavar="HOST:PORT")
    p_serve.add_argument("--workers", default="auto", help="parallel worker count or 'auto'")
    p_serve.add_argument("--cors-origin", default=None, help="origin allowed for CORS")
    p_serve.add_argument(
        "--max-upload-bytes", type=int, default=256 * 1024 * 1024, metavar="N"
    )
    p_serve.add_argument("--ui-dir", default=None, help="directory of static UI assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    p_bench = sub.add_parser("bench", help="run the 6-step timing protocol")
    p_bench.add_argument("file", nargs="?", default=None, help="CSV file to benchmark")
    p_bench.add_argument(
        "--synthetic-rows", type=int, default=None, metavar="N",
        help="benchmark a generated dataset of N rows instead of a file",
    )
    p_bench.add_argument("--seed", type=int, default=42, help="seed for --synthetic-rows")
    p_bench.add_argument("--trials", type=int, default=100, help="trials per mode")
    p_bench.add_argument("--modes", default="serial,parallel", help="comma-separated: serial,parallel")
    p_bench.add_argument("--out", default=None, metavar="REPORT.json", help="also write a JSON report")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

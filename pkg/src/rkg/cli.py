"""Command-line interface: rkg build|query|validate|reason|stats|export|serve.

Exit codes: 0 success, 1 validation or consistency failure, 2 usage or parse
error, 3 unreadable/unwritable file.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import seed
from ._lex import ParseError
from .dataset import Dataset, load_dataset, load_files
from .endpoint import ConfigError, ServiceConfig, serve
from .inference import check_consistency
from .query import evaluate, parse_query, to_results_json, to_text_table
from .schema import SchemaError, extract_schema, validate
from .sheetmap import CsvError, MappingError, apply, load_workbook, parse_rules
from .store import WELL_KNOWN_PREFIXES, GraphStore, PrefixMap
from .terms import BASE, TermError
from .turtle import serialize_ntriples, serialize_turtle

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("rkg")


class UsageError(Exception):
    pass


# -- helpers -------------------------------------------------------------------

def _write(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _dataset(args, reason: bool) -> Dataset:
    return load_dataset(args.schema or (), args.data or (), reason=reason)


def _query_text(arg: str) -> str:
    """A query argument is a file path, a bundled query name (cq3), or query text."""
    p = Path(arg)
    if "\n" not in arg and len(arg) < 4096 and p.is_file():
        return p.read_text(encoding="utf-8")
    if arg in seed.QUERIES:
        return seed.query_path(arg).read_text(encoding="utf-8")
    return arg


def _sheet_arg(value: str) -> tuple[str, Path]:
    name, sep, path = value.partition("=")
    if not sep:
        return Path(value).stem, Path(value)
    if not name or not path:
        raise argparse.ArgumentTypeError(f"expected NAME=PATH, got {value!r}")
    return name, Path(path)


# -- commands ------------------------------------------------------------------

def cmd_build(args) -> int:
    if args.rules is None:
        if args.sheet:
            raise UsageError("--sheet needs --rules")
        rules_text = seed.read(seed.RULES_FILE)
        sheets = {name: seed.path(f) for name, f in seed.SHEETS.items()}
    else:
        if not args.sheet:
            raise UsageError("--rules needs at least one --sheet NAME=PATH")
        rules_text = Path(args.rules).read_text(encoding="utf-8")
        sheets = dict(args.sheet)
    rules = parse_rules(rules_text)
    wb = load_workbook({name: p.read_text(encoding="utf-8") for name, p in sheets.items()})
    schema_store = load_files(args.schema) if args.schema else seed.load_schema_store()
    pm = PrefixMap(WELL_KNOWN_PREFIXES)
    pm[""] = args.base
    store, prov = apply(rules, wb, pm, extract_schema(schema_store), base=args.base)
    _write(serialize_turtle(store), args.output)
    sidecar = args.provenance
    if sidecar is None and args.output not in (None, "-"):
        sidecar = args.output + ".prov.jsonl"
    if sidecar is not None:
        Path(sidecar).write_text(prov.to_jsonl(), encoding="utf-8")
    for w in prov.warnings:
        log.warning(w)
    _say(args, f"{len(rules)} rule(s), {len(prov)} row(s) visited, {len(store)} triple(s)")
    return EXIT_OK


def cmd_query(args) -> int:
    q = parse_query(_query_text(args.query))
    ds = _dataset(args, reason=args.reason)
    table = evaluate(q, ds.combined)
    if args.format == "json":
        _write(to_results_json(table, indent=2) + "\n", args.output)
    else:
        _write(to_text_table(table), args.output)
    _say(args, f"{len(table)} result(s)")
    return EXIT_OK


def cmd_validate(args) -> int:
    ds = _dataset(args, reason=not args.no_reason)
    report = validate(ds.combined, ds.schema, severity=args.severity)
    consistency = check_consistency(ds.combined, ds.schema)
    if args.format == "json":
        doc = {"validation": report.to_dict(), "consistency": consistency.to_dict()}
        _write(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        _write(report.to_text() + consistency.to_text(), args.output)
    return EXIT_INVALID if report.errors or not consistency.consistent else EXIT_OK


def cmd_reason(args) -> int:
    ds = _dataset(args, reason=True)
    if args.exclude_inferred:
        out = GraphStore(ds.data, prefixes=ds.combined.prefixes)
    else:
        # asserted data plus everything inferred, without the schema's own triples
        out = GraphStore(prefixes=ds.combined.prefixes)
        out.update(t for t in ds.combined if t in ds.data or t not in ds.schema_store)
    _write(serialize_turtle(out), args.output)
    if args.inferred_log:
        Path(args.inferred_log).write_text(serialize_ntriples(ds.inference.inferred),
                                           encoding="utf-8")
    _say(args, ds.inference.to_text().rstrip())
    consistency = check_consistency(ds.combined, ds.schema)
    if not consistency.consistent:
        _say(args, consistency.to_text().rstrip())
        return EXIT_INVALID
    return EXIT_OK


def cmd_stats(args) -> int:
    ds = _dataset(args, reason=False)
    metrics = ds.metrics()
    if args.json:
        _write(json.dumps(metrics.to_dict(), indent=2) + "\n", args.output)
    else:
        _write(metrics.to_text(), args.output)
    return EXIT_OK


def cmd_export(args) -> int:
    ds = _dataset(args, reason=args.reason)
    store = ds.combined if args.include_schema or args.reason else ds.data
    if args.format == "ntriples":
        _write(serialize_ntriples(store), args.output)
    else:
        _write(serialize_turtle(store), args.output)
    return EXIT_OK


def cmd_serve(args) -> int:
    kwargs = dict(schema_paths=list(args.schema or ()), data_paths=list(args.data or ()),
                  reason_on_load=not args.no_reason, host=args.host, timeout=args.timeout,
                  max_query_length=args.max_query_length)
    if args.port is not None:
        config = ServiceConfig(port=args.port, **kwargs)
    else:
        config = ServiceConfig.from_env(**kwargs)
    _say(args, f"loading dataset, then listening on {config.host}:{config.port}")
    serve(config)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------

def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--schema", action="append", metavar="PATH",
                   help="schema file (Turtle or N-Triples); repeatable")
    p.add_argument("--data", action="append", metavar="PATH",
                   help="data file (Turtle or N-Triples); repeatable. With neither "
                        "--schema nor --data the bundled seed dataset is used")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rkg", description=__doc__.splitlines()[0])
    parser.add_argument("--base", default=os.environ.get("RKG_BASE", BASE),
                        help="namespace for generated individuals (env RKG_BASE)")
    parser.add_argument("--quiet", "-q", action="store_true", help="suppress summaries")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="run mapping rules over CSV sheets")
    p.add_argument("--rules", metavar="PATH", help="rule file (default: bundled rules)")
    p.add_argument("--sheet", action="append", type=_sheet_arg, metavar="NAME=PATH",
                   help="CSV sheet; NAME defaults to the file stem; repeatable")
    p.add_argument("--schema", action="append", metavar="PATH",
                   help="schema deciding property kinds (default: bundled schema)")
    p.add_argument("-o", "--output", help="Turtle output (default: stdout)")
    p.add_argument("--provenance", metavar="PATH",
                   help="provenance JSON lines (default: OUTPUT.prov.jsonl)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="evaluate a SELECT query")
    p.add_argument("query", help="query file, bundled name (cq2..cq5), or query text")
    _add_inputs(p)
    p.add_argument("--reason", action="store_true", help="materialize before querying")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("validate", help="check data against the schema")
    _add_inputs(p)
    p.add_argument("--no-reason", action="store_true", help="validate asserted triples only")
    p.add_argument("--severity", choices=("warning", "error"), default="warning",
                   help="lowest severity to report")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reason", help="materialize inferences")
    _add_inputs(p)
    p.add_argument("--exclude-inferred", action="store_true",
                   help="write asserted data only")
    p.add_argument("--inferred-log", metavar="PATH", help="write inferred triples as N-Triples")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reason)

    p = sub.add_parser("stats", help="schema and data metrics")
    _add_inputs(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="re-serialize a dataset")
    _add_inputs(p)
    p.add_argument("--format", choices=("turtle", "ntriples"), default="turtle")
    p.add_argument("--reason", action="store_true", help="include inferred triples")
    p.add_argument("--include-schema", action="store_true", help="include schema triples")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP query endpoint")
    _add_inputs(p)
    p.add_argument("--port", type=int, help="TCP port (default: env PORT, else 8080)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--no-reason", action="store_true", help="skip materialization on load")
    p.add_argument("--timeout", type=float, default=10.0, help="per-query seconds")
    p.add_argument("--max-query-length", type=int, default=64 * 1024, metavar="BYTES")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"rkg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"rkg: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CsvError, MappingError, SchemaError, TermError, ConfigError) as e:
        print(f"rkg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"rkg: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

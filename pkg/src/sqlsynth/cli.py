"""Command-line entry point: ``sqlsynth <command> ...``.

Exit codes: 0 success, 1 partial (some inputs skipped), 2 fatal error.
Paths default to files under ``$SQLSYNTH_DATA`` (``tables.json``,
``train.json``, ``content/``), falling back to ``data/seed``.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import SqlSynthError
from .io import atomic_write_text, read_jsonl, write_json
from .schema import UNREACHABLE, build_table_graph, load_content, load_schemas
from .sql import parse_sql, render_sql
from .synth import SAMPLERS, SynthesisConfig, synthesize_dataset
from .template import build_pool, load_corpus, load_pool, save_pool

log = logging.getLogger("sqlsynth")

EXIT_OK, EXIT_PARTIAL, EXIT_FATAL = 0, 1, 2
DATA_ENV = "SQLSYNTH_DATA"

DEFAULTS = {
    "seed": 0,
    "gamma": 5.0,
    "samples": 1000,
    "samples_per_db": None,
    "max_join_tables": None,
    "sampler": "weighted",
    "retries": 20,
    "no_ir": False,
    "no_fallback_values": False,
    "resample_size": 7000,
    "repetitions": 1000,
    "working_size": None,
    "gammas": [2.0, 5.0, 10.0],
    "uniform_baseline": False,
    "bins": 20,
}


class Fatal(Exception):
    pass


def data_dir() -> Path:
    return Path(os.environ.get(DATA_ENV, "data/seed"))


def _path(value, default_name: str | None, must_exist: bool = True, what: str = "file") -> Path | None:
    p = Path(value) if value else (data_dir() / default_name if default_name else None)
    if p is None:
        return None
    if must_exist and not p.exists():
        raise Fatal(f"{what} not found: {p}")
    return p


def resolve(args, name):
    """Flag value, else config-file value, else built-in default."""
    value = getattr(args, name, None)
    if value is not None and value is not False:
        return value
    if name in args.config_values:
        return args.config_values[name]
    return DEFAULTS.get(name, value)


def _schemas(args):
    path = _path(args.tables, "tables.json", what="schema file")
    try:
        return load_schemas(path)
    except (OSError, ValueError, KeyError) as exc:
        raise Fatal(f"cannot read schemas from {path}: {exc}") from exc


def _contents(args, schemas):
    if args.content_dir:
        root = _path(args.content_dir, None, what="content directory")
    else:
        root = data_dir() / "content"
        if not root.is_dir():
            log.info("no content directory; value slots use fallback literals")
            return {}
    return {db: load_content(root, s) for db, s in schemas.items()}


def _synthesis_config(args) -> SynthesisConfig:
    per_db = resolve(args, "samples_per_db")
    try:
        return SynthesisConfig(
            gamma=float(resolve(args, "gamma")),
            seed=int(resolve(args, "seed")),
            total_samples=None if per_db is not None else int(resolve(args, "samples")),
            samples_per_db=None if per_db is None else int(per_db),
            max_join_tables=resolve(args, "max_join_tables"),
            allow_fallback_values=not resolve(args, "no_fallback_values"),
            sampler=resolve(args, "sampler"),
            retries=int(resolve(args, "retries")),
            with_ir=not resolve(args, "no_ir"),
        )
    except ValueError as exc:
        raise Fatal(str(exc)) from exc


def _pool(args, schemas):
    if getattr(args, "pool", None):
        path = _path(args.pool, None, what="pool file")
        try:
            return load_pool(path)
        except (OSError, ValueError, KeyError) as exc:
            raise Fatal(f"cannot read pool {path}: {exc}") from exc
    corpus = _corpus(args)
    pool, _ = build_pool(corpus, schemas)
    return pool


def _corpus(args):
    path = _path(args.corpus, "train.json", what="corpus file")
    try:
        return load_corpus(path)
    except (OSError, ValueError) as exc:
        raise Fatal(f"cannot read corpus {path}: {exc}") from exc


# commands


def cmd_extract(args) -> int:
    schemas = _schemas(args)
    corpus = _corpus(args)
    if not corpus:
        log.warning("corpus is empty; writing an empty pool")
    pool, report = build_pool(corpus, schemas)
    save_pool(pool, args.out)
    summary = report.to_json()
    summary["templates"] = len(pool)
    if args.report:
        write_json(args.report, summary)
    log.info("%d examples, %d extracted, %d templates, skipped %s",
             report.total, report.extracted, len(pool), summary["skipped"] or "none")
    return EXIT_PARTIAL if report.skipped else EXIT_OK


def cmd_synthesize(args) -> int:
    schemas = _schemas(args)
    pool = _pool(args, schemas)
    contents = _contents(args, schemas)
    config = _synthesis_config(args)
    examples, report = synthesize_dataset(pool, schemas, contents, config)
    lines = [json.dumps(e.to_json(with_ir=config.with_ir), ensure_ascii=False) for e in examples]
    atomic_write_text(args.out, "".join(line + "\n" for line in lines))
    summary = report.to_json()
    if args.report:
        write_json(args.report, summary)
    log.info("requested %d, emitted %d, skipped %d", report.requested, report.emitted, summary["skipped"])
    return EXIT_PARTIAL if summary["skipped"] else EXIT_OK


def cmd_to_ir(args) -> int:
    from .ir import to_ir

    schemas = _schemas(args)
    if args.db not in schemas:
        raise Fatal(f"unknown db_id {args.db!r}")
    schema = schemas[args.db]
    sql = args.sql if args.sql != "-" else sys.stdin.read()
    try:
        ast = parse_sql(sql, schema)
    except SqlSynthError as exc:
        raise Fatal(f"cannot parse query: {exc}") from exc
    ir = to_ir(ast, schema)
    if args.json:
        print(json.dumps({"sql": render_sql(ast, schema), "ir": ir.text, "rules": list(ir.rules)}))
    else:
        print(ir.text)
    return EXIT_OK


def cmd_graph(args) -> int:
    schemas = _schemas(args)
    if args.db not in schemas:
        raise Fatal(f"unknown db_id {args.db!r}")
    schema = schemas[args.db]
    graph = build_table_graph(schema)
    names = [t.name for t in schema.tables]
    matrix = [[None if d is UNREACHABLE else d for d in row] for row in graph.matrix()]
    if args.json:
        print(json.dumps({"db_id": schema.db_id, "tables": names, "distance": matrix}))
        return EXIT_OK
    width = max(len(n) for n in names)
    print(" " * width + " " + " ".join(f"{i:>3}" for i in range(len(names))))
    for i, (name, row) in enumerate(zip(names, matrix)):
        cells = " ".join(f"{'-' if d is None else d:>3}" for d in row)
        print(f"{name:<{width}} {cells}   [{i}]")
    return EXIT_OK


def cmd_calibrate_gamma(args) -> int:
    from .stats import calibrate_gamma, table_counts

    schemas = _schemas(args)
    reference_path = _path(args.corpus, "train.json", what="reference corpus")
    try:
        reference = load_corpus(reference_path)
    except (OSError, ValueError) as exc:
        raise Fatal(f"cannot read reference corpus {reference_path}: {exc}") from exc
    ref_counts = table_counts(reference, schemas)
    if not ref_counts.counts:
        raise Fatal("reference corpus has no parseable queries")
    pool = _pool(args, schemas)
    contents = _contents(args, schemas)
    config = _synthesis_config(args)
    gammas = [float(g) for g in resolve(args, "gammas")]
    result = calibrate_gamma(
        pool, schemas, ref_counts.counts, gammas, contents, config,
        resample_size=int(resolve(args, "resample_size")),
        repetitions=int(resolve(args, "repetitions")),
        working_size=resolve(args, "working_size"),
        seed=int(resolve(args, "seed")),
        uniform_baseline=bool(resolve(args, "uniform_baseline")),
        bins=int(resolve(args, "bins")),
    )
    out = result.to_json()
    if args.out:
        write_json(args.out, out)
    else:
        print(json.dumps(out, indent=1))
    if args.plot:
        from .plot import plot_calibration

        plot_calibration(result, args.plot)
    log.info("reference mean %.4f; recommended gamma %g", result.reference.mean, result.recommended)
    return EXIT_OK


def cmd_stats(args) -> int:
    from .stats import count_histogram, table_counts
    from .synth import validity_problems

    schemas = _schemas(args)
    path = Path(args.input)
    if not path.is_file():
        raise Fatal(f"input not found: {path}")
    malformed = 0
    if path.suffix == ".jsonl":
        records = []
        for n, rec, err in read_jsonl(path):
            if err is not None:
                malformed += 1
                log.warning("line %d: %s", n, err)
            else:
                records.append(rec)
        sql_key = "sql"
    else:
        records = load_corpus(path)
        sql_key = "query"
    counts = table_counts(records, schemas, sql_key=sql_key)
    valid = invalid = 0
    for rec in records:
        schema = schemas.get(rec.get("db_id"))
        if schema is None or rec.get(sql_key) is None:
            continue
        try:
            problems = validity_problems(parse_sql(rec[sql_key], schema), schema)
        except SqlSynthError:
            continue
        if problems:
            invalid += 1
        else:
            valid += 1
    if not records:
        log.warning("no records in %s", path)
    mean = sum(counts.counts) / len(counts.counts) if counts.counts else None
    out = {
        "input": str(path),
        "records": len(records),
        "malformed_lines": malformed,
        "unparsed": counts.failures,
        "unparsed_reasons": counts.errors,
        "table_count_histogram": {str(k): v for k, v in count_histogram(counts.counts).items()},
        "mean_table_count": mean,
        "valid": valid,
        "invalid": invalid,
    }
    if args.out:
        write_json(args.out, out)
    else:
        print(json.dumps(out, indent=1))
    return EXIT_PARTIAL if malformed or counts.failures else EXIT_OK


# parser


def _add_paths(p, corpus=False, pool=False, content=False):
    p.add_argument("--tables", help="Spider tables.json (default: $SQLSYNTH_DATA/tables.json)")
    if corpus:
        p.add_argument("--corpus", help="Spider-format corpus JSON (default: $SQLSYNTH_DATA/train.json)")
    if pool:
        p.add_argument("--pool", help="template pool JSON; extracted from --corpus when omitted")
    if content:
        p.add_argument("--content-dir", help="per-db content (<db>.json, <db>.sqlite or <db>/<db>.sqlite)")


def _add_synthesis(p):
    p.add_argument("--seed", type=int)
    p.add_argument("--gamma", type=float, help="distance decay rate (default 5)")
    p.add_argument("--samples", type=int, help="total samples (default 1000)")
    p.add_argument("--samples-per-db", type=int, help="samples per database instead of a total")
    p.add_argument("--max-join-tables", type=int)
    p.add_argument("--sampler", choices=SAMPLERS, help="column sampler (default weighted)")
    p.add_argument("--retries", type=int, help="attempts per sample before skipping (default 20)")
    p.add_argument("--no-fallback-values", action="store_true", help="fail slots whose column has no content")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sqlsynth", description="Template-based text-to-SQL data synthesis.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--config", help="JSON file with option defaults (flags take precedence)")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="build a template pool from a corpus")
    _add_paths(p, corpus=True)
    p.add_argument("--out", required=True, help="pool JSON to write")
    p.add_argument("--report", help="skip report JSON to write")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("synthesize", help="synthesize SQL (and IR) from a template pool")
    _add_paths(p, corpus=True, pool=True, content=True)
    _add_synthesis(p)
    p.add_argument("--no-ir", action="store_true", help="omit the ir field")
    p.add_argument("--out", required=True, help="JSONL output")
    p.add_argument("--report", help="synthesis report JSON")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("to-ir", help="lower one query to IR")
    _add_paths(p)
    p.add_argument("--db", required=True)
    p.add_argument("sql", help="SQL text, or - to read stdin")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_to_ir)

    p = sub.add_parser("graph", help="print table distances for a database")
    _add_paths(p)
    p.add_argument("--db", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("calibrate-gamma", help="bootstrap table counts and recommend gamma")
    _add_paths(p, corpus=True, pool=True, content=True)
    _add_synthesis(p)
    p.add_argument("--gammas", type=float, nargs="+", help="candidate gammas (default 2 5 10)")
    p.add_argument("--resample-size", type=int, help="bootstrap resample size N (default 7000)")
    p.add_argument("--repetitions", type=int, help="bootstrap repetitions R (default 1000)")
    p.add_argument("--working-size", type=int, help="synthetic queries per candidate (default N)")
    p.add_argument("--uniform-baseline", action="store_true", help="also report uniform column sampling")
    p.add_argument("--bins", type=int)
    p.add_argument("--out", help="report JSON (default stdout)")
    p.add_argument("--plot", help="write a histogram figure (needs matplotlib)")
    p.set_defaults(func=cmd_calibrate_gamma, no_ir=True)

    p = sub.add_parser("stats", help="table-count histogram and validity summary")
    _add_paths(p)
    p.add_argument("input", help="synthetic JSONL (sql field) or corpus JSON (query field)")
    p.add_argument("--out", help="report JSON (default stdout)")
    p.set_defaults(func=cmd_stats)
    return ap


def _load_config(path) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise Fatal(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise Fatal(f"config {path} must be a JSON object")
    unknown = sorted(k for k in data if k.replace("-", "_") not in DEFAULTS)
    if unknown:
        raise Fatal(f"unknown config keys: {', '.join(unknown)}")
    return {k.replace("-", "_"): v for k, v in data.items()}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    try:
        args.config_values = _load_config(args.config)
        return args.func(args)
    except Fatal as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Subcommands: extract, eval, export, report, lexicon-validate.  Exit codes
are 0 for success, 1 for usage or format errors, 2 when a batch finished
but some inputs failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .assembler import HeuristicConfig, load_heuristics
from .corpus import DEFAULT_ABBREVIATIONS, load_abbreviations, load_report
from .evaluation import compute_report, evaluate_corpus
from .lexicon import Lexicon, LexiconError, load_lexicon, merge_lexicons
from .matcher import compile_lexicon
from .pipeline import extract_document
from .report import write_report_files
from .resources import (
    default_abbreviations_path,
    default_heuristics_path,
    default_lexicon_paths,
)
from .store import CsvFormatError, EventStore, StoreError, import_csv

__all__ = ["main"]

LOGGER = logging.getLogger("brieflens")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route that through our codes
    def error(self, message: str) -> "None":  # type: ignore[override]
        raise _UsageError(message)


def _add_lexicon_flags(parser: argparse.ArgumentParser) -> None:
    defaults = default_lexicon_paths()
    parser.add_argument("--animals", type=Path, default=defaults["animals"],
                        help="animal lexicon CSV (default: shipped list)")
    parser.add_argument("--products", type=Path, default=defaults["products"],
                        help="product lexicon CSV (default: shipped list)")
    parser.add_argument("--countries", type=Path, default=defaults["countries"],
                        help="country lexicon CSV (default: shipped list)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="brieflens",
        description="Extract, store, evaluate and summarize trafficking events"
        " from plain-text enforcement briefs.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="more logging (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="extract events from briefs into the store")
    p_extract.add_argument("inputs", nargs="+", type=Path,
                           help="brief files or directories of *.txt briefs")
    _add_lexicon_flags(p_extract)
    p_extract.add_argument("--abbreviations", type=Path, default=None,
                           help="sentence-abbreviation list (default: shipped list)")
    p_extract.add_argument("--heuristics", type=Path, default=None,
                           help="key=value window configuration (default: shipped config)")
    p_extract.add_argument("--store", type=Path, default=Path("events.db"),
                           help="event store path (default: events.db)")
    p_extract.add_argument("--jobs", type=int, default=1,
                           help="parallel workers for parsing (default: 1)")
    p_extract.set_defaults(func=cmd_extract)

    p_eval = sub.add_parser("eval", help="score predictions against a gold CSV")
    p_eval.add_argument("--gold", type=Path, required=True, help="gold events CSV")
    p_eval.add_argument("--pred", type=Path, default=None,
                        help="predicted events CSV (alternative to --store)")
    p_eval.add_argument("--store", type=Path, default=None,
                        help="read predictions from this event store")
    p_eval.add_argument("--out", type=Path, default=Path("."),
                        help="directory for the machine-readable report (default: .)")
    p_eval.set_defaults(func=cmd_eval)

    p_export = sub.add_parser("export", help="export the store as CSV")
    p_export.add_argument("out", type=Path, help="destination CSV path")
    p_export.add_argument("--store", type=Path, default=Path("events.db"),
                          help="event store path (default: events.db)")
    p_export.set_defaults(func=cmd_export)

    p_report = sub.add_parser("report", help="write summary.json and dashboard.html")
    p_report.add_argument("--store", type=Path, default=Path("events.db"),
                          help="event store path (default: events.db)")
    p_report.add_argument("--out", type=Path, default=Path("."),
                          help="output directory (default: .)")
    p_report.set_defaults(func=cmd_report)

    p_lex = sub.add_parser("lexicon-validate", help="check the lexicon files")
    _add_lexicon_flags(p_lex)
    p_lex.set_defaults(func=cmd_lexicon_validate)

    return parser


def _load_merged_lexicon(args: argparse.Namespace) -> Lexicon:
    lexicons = [load_lexicon(args.animals), load_lexicon(args.products),
                load_lexicon(args.countries)]
    return merge_lexicons(lexicons)


def _collect_brief_paths(inputs: list[Path]) -> list[Path]:
    paths: list[Path] = []
    for item in inputs:
        if item.is_dir():
            paths.extend(sorted(item.glob("*.txt")))
        else:
            paths.append(item)
    return paths


def cmd_extract(args: argparse.Namespace) -> int:
    try:
        lexicon = _load_merged_lexicon(args)
    except (LexiconError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    matcher = compile_lexicon(lexicon)

    try:
        abbreviations = (
            load_abbreviations(args.abbreviations)
            if args.abbreviations is not None
            else load_abbreviations(default_abbreviations_path())
        )
    except OSError:
        abbreviations = DEFAULT_ABBREVIATIONS
    try:
        config = (
            load_heuristics(args.heuristics)
            if args.heuristics is not None
            else load_heuristics(default_heuristics_path())
        )
    except (OSError, ValueError) as exc:
        if args.heuristics is not None:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        config = HeuristicConfig()

    paths = _collect_brief_paths(args.inputs)
    if not paths:
        print("no briefs found", file=sys.stderr)
        return EXIT_OK

    def process(path: Path):
        doc = load_report(path, abbreviations)
        return doc, extract_document(doc, matcher, config)

    failures = 0
    results = []
    jobs = max(1, args.jobs)
    if jobs == 1:
        outcomes = []
        for path in paths:
            try:
                outcomes.append((path, process(path), None))
            except Exception as exc:  # keep the batch going
                outcomes.append((path, None, exc))
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [(path, pool.submit(process, path)) for path in paths]
            outcomes = []
            for path, future in futures:
                try:
                    outcomes.append((path, future.result(), None))
                except Exception as exc:
                    outcomes.append((path, None, exc))

    try:
        with EventStore(args.store) as store:
            for path, result, exc in outcomes:
                if exc is not None:
                    failures += 1
                    print(f"error: {path.name}: {exc}", file=sys.stderr)
                    continue
                doc, events = result
                store.register_report(doc.report_id, doc.year, doc.month, str(path))
                store.ingest(events)
                results.append((doc.report_id, len(events)))
                print(f"{doc.report_id}: {len(events)} events")
    except StoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    LOGGER.info("extracted %d reports, %d failures", len(results), failures)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    if (args.pred is None) == (args.store is None):
        print("error: give exactly one of --pred or --store", file=sys.stderr)
        return EXIT_USAGE
    try:
        gold = import_csv(args.gold)
        if args.pred is not None:
            predicted = import_csv(args.pred)
        else:
            with EventStore(args.store) as store:
                predicted = store.events()
    except (CsvFormatError, StoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = compute_report(evaluate_corpus(predicted, gold))
    print(report.counts_line())
    print(f"detection_rate={report.detection_rate:.4f}")

    args.out.mkdir(parents=True, exist_ok=True)
    out_path = args.out / "eval_report.txt"
    out_path.write_text("\n".join(report.machine_lines()) + "\n", encoding="utf-8")
    LOGGER.info("wrote %s", out_path)
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    try:
        with EventStore(args.store) as store:
            rows = store.export_csv(args.out)
    except (StoreError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {rows} events to {args.out}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    try:
        with EventStore(args.store) as store:
            json_path, html_path = write_report_files(store, args.out)
    except (StoreError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {json_path} and {html_path}")
    return EXIT_OK


def cmd_lexicon_validate(args: argparse.Namespace) -> int:
    lexicons = []
    failed = False
    for kind in ("animals", "products", "countries"):
        path: Path = getattr(args, kind)
        try:
            lexicon = load_lexicon(path)
        except (LexiconError, OSError) as exc:
            print(f"{kind}: INVALID: {exc}", file=sys.stderr)
            failed = True
            continue
        lexicons.append(lexicon)
        print(f"{kind}: {lexicon.n_rows} rows, {len(lexicon)} surfaces ({path.name})")
    if not failed:
        try:
            merged = merge_lexicons(lexicons)
        except LexiconError as exc:
            print(f"merge: INVALID: {exc}", file=sys.stderr)
            failed = True
        else:
            print(f"merged: {len(merged)} surfaces, no conflicts")
    return EXIT_USAGE if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
        )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

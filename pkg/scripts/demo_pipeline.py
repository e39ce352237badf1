#!/usr/bin/env python3
"""Run the whole pipeline on the bundled demo corpus and show every stage.

Extracts events from a directory of briefs, prints them as a table,
scores them against a gold CSV when one is available, and writes the
JSON + HTML summary into the output directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT / "src"))

from brieflens.assembler import HeuristicConfig, load_heuristics
from brieflens.corpus import load_abbreviations, load_report
from brieflens.evaluation import compute_report, evaluate_corpus
from brieflens.lexicon import load_lexicon, merge_lexicons
from brieflens.matcher import compile_lexicon
from brieflens.pipeline import extract_document
from brieflens.report import write_report_files
from brieflens.resources import (
    default_abbreviations_path,
    default_heuristics_path,
    default_lexicon_paths,
)
from brieflens.store import EventStore, format_weight, import_csv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--briefs", type=Path, default=REPO_ROOT / "tests" / "fixtures" / "briefs",
        help="directory of *.txt briefs (default: bundled demo corpus)",
    )
    parser.add_argument(
        "--gold", type=Path, default=REPO_ROOT / "tests" / "fixtures" / "gold.csv",
        help="gold CSV to score against; pass a missing path to skip scoring",
    )
    parser.add_argument(
        "--out", type=Path, default=REPO_ROOT / "demo_out",
        help="output directory for the store and the rendered reports",
    )
    return parser


def show(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return format_weight(value)
    return str(value)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    lexicon = merge_lexicons(
        [load_lexicon(path) for path in default_lexicon_paths().values()]
    )
    matcher = compile_lexicon(lexicon)
    abbreviations = load_abbreviations(default_abbreviations_path())
    config: HeuristicConfig = load_heuristics(default_heuristics_path())
    print(f"lexicon: {len(lexicon)} surfaces   windows: {config}")

    paths = sorted(args.briefs.glob("*.txt"))
    if not paths:
        print(f"no briefs under {args.briefs}", file=sys.stderr)
        return 1

    columns = ("report", "sent", "country", "species", "product", "qty", "kg", "arrests")
    print()
    print("{:<14} {:>4} {:<10} {:<10} {:<8} {:>4} {:>8} {:>7}".format(*columns))
    with EventStore(args.out / "events.db") as store:
        for path in paths:
            doc = load_report(path, abbreviations)
            events = extract_document(doc, matcher, config)
            store.register_report(doc.report_id, doc.year, doc.month, str(path))
            store.ingest(events)
            for e in events:
                print(
                    "{:<14} {:>4} {:<10} {:<10} {:<8} {:>4} {:>8} {:>7}".format(
                        e.report_id, e.sentence_index, show(e.country), show(e.species),
                        show(e.product), show(e.quantity), show(e.weight_kg),
                        show(e.arrest_count),
                    )
                )
        print()

        if args.gold.exists():
            gold = import_csv(args.gold)
            result = compute_report(evaluate_corpus(store.events(), gold))
            print(result.counts_line())
            print(f"detection_rate={result.detection_rate:.4f}")
        else:
            print(f"no gold file at {args.gold}; skipping evaluation")

        json_path, html_path = write_report_files(store, args.out)
    print(f"wrote {json_path} and {html_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""End-to-end extraction for a single document.

Thin glue over the matcher, the measure parser and the assembler: find
lexical spans, find numeric spans, merge with lexical precedence, then
assemble events.
"""

from __future__ import annotations

from .assembler import HeuristicConfig, TraffickingEvent, assemble
from .corpus import ReportDocument
from .matcher import CompiledMatcher, find_entities, merge_spans
from .measures import numeric_spans

__all__ = ["extract_document"]


def extract_document(
    doc: ReportDocument,
    matcher: CompiledMatcher,
    config: HeuristicConfig = HeuristicConfig(),
) -> list[TraffickingEvent]:
    """Extract all events of one document."""
    lexical = find_entities(doc, matcher)
    numeric = []
    for sentence in doc.sentences:
        numeric.extend(numeric_spans(sentence))
    spans = merge_spans(lexical, numeric)
    return assemble(doc, spans, config)

"""Token-aligned phrase matching over lexicon surfaces.

Surfaces are compiled to case-folded token sequences, so "scales" never
fires inside "escalates" and multi-word surfaces such as "sea turtle" are
matched as phrases.  Overlaps are resolved leftmost-longest: the candidate
starting earliest wins, and among candidates sharing a start the longest
wins.  The result is always a sorted, non-overlapping list of spans.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import ReportDocument, tokenize
from .lexicon import Lexicon

__all__ = [
    "CARDINAL",
    "WEIGHT",
    "CompiledMatcher",
    "EntitySpan",
    "compile_lexicon",
    "find_entities",
    "merge_spans",
]

# Numeric span labels; lexical labels live in the lexicon module.
CARDINAL = "CARDINAL"
WEIGHT = "WEIGHT"


@dataclass(frozen=True)
class EntitySpan:
    """A labeled span with document-relative character offsets."""

    start_char: int
    end_char: int
    text: str
    label: str
    canonical: str


@dataclass(frozen=True)
class CompiledMatcher:
    """Phrase table keyed by case-folded token tuples.

    Matching behaviour is a pure function of the lexicon the matcher was
    compiled from; ``lexicon_version`` records which one that was.
    """

    phrases: Mapping[tuple[str, ...], tuple[str, str]]
    max_len: int
    lexicon_version: str


def compile_lexicon(lexicon: Lexicon) -> CompiledMatcher:
    """Compile every lexicon surface into the token-tuple phrase table."""
    phrases: dict[tuple[str, ...], tuple[str, str]] = {}
    # sorted iteration keeps compilation deterministic if two distinct
    # surfaces collapse to the same token sequence
    for surface in sorted(lexicon.entries):
        pair = lexicon.entries[surface]
        key = tuple(tok.lower for tok in tokenize(surface))
        if key:
            phrases.setdefault(key, pair)
    max_len = max((len(key) for key in phrases), default=0)
    return CompiledMatcher(phrases=phrases, max_len=max_len, lexicon_version=lexicon.version)


def find_entities(doc: ReportDocument, matcher: CompiledMatcher) -> list[EntitySpan]:
    """Find all lexicon matches in ``doc``, sentence by sentence.

    The scan is greedy left to right within each sentence: at every position
    the longest matching phrase is taken and the scan resumes after it,
    which realises the leftmost-longest rule.
    """
    spans: list[EntitySpan] = []
    if matcher.max_len == 0:
        return spans
    for sentence in doc.sentences:
        tokens = sentence.tokens
        lowers = [tok.lower for tok in tokens]
        n = len(tokens)
        i = 0
        while i < n:
            found = None
            for length in range(min(matcher.max_len, n - i), 0, -1):
                pair = matcher.phrases.get(tuple(lowers[i : i + length]))
                if pair is not None:
                    found = (length, pair)
                    break
            if found is None:
                i += 1
                continue
            length, (label, canonical) = found
            start = tokens[i].start_char
            end = tokens[i + length - 1].end_char
            spans.append(
                EntitySpan(
                    start_char=start,
                    end_char=end,
                    text=doc.raw_text[start:end],
                    label=label,
                    canonical=canonical,
                )
            )
            i += length
    return spans


def merge_spans(
    lexical: Iterable[EntitySpan], numeric: Iterable[EntitySpan]
) -> list[EntitySpan]:
    """Union lexical and numeric spans; on overlap the lexical span wins.

    Both inputs must individually be free of overlaps.  The result is sorted
    by start offset and non-overlapping.
    """
    kept = sorted(lexical, key=lambda s: (s.start_char, s.end_char))
    intervals = [(s.start_char, s.end_char) for s in kept]
    merged = list(kept)
    for span in numeric:
        if any(span.start_char < end and start < span.end_char for start, end in intervals):
            continue
        merged.append(span)
    merged.sort(key=lambda s: (s.start_char, s.end_char))
    return merged

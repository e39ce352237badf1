"""Assembling trafficking events from annotated sentences.

Each candidate sentence (one with an animal or product span, or an arrest
mention) contributes events by a fixed proximity procedure:

1. every PRODUCT span pairs with the nearest ANIMAL span to its left within
   the pairing window; a paired product and its animal become one event,
   while animals that modified no product and products with no nearby
   animal each become their own event;
2. a CARDINAL immediately before an event's species or product span (within
   the quantity window) becomes that event's quantity, each cardinal
   feeding at most one event;
3. weight spans attach to the nearest event that still lacks a weight, ties
   going to the leftmost event;
4. the sentence's arrest count, when detected, lands on every event of the
   sentence; cardinals already consumed as quantities are not arrest-count
   candidates; a sentence with only an arrest mention yields a single
   event with no species or product;
5. the country is the nearest COUNTRY span in the sentence, falling back to
   the first COUNTRY span of the surrounding paragraph.

All distances are token distances, so the procedure is deterministic for a
given document, span list and configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import ReportDocument, SentenceSpan
from .lexicon import ANIMAL, COUNTRY, PRODUCT
from .matcher import CARDINAL, WEIGHT, EntitySpan
from .measures import detect_arrest_count, has_arrest_lexeme

__all__ = [
    "HeuristicConfig",
    "TraffickingEvent",
    "assemble",
    "load_heuristics",
]


@dataclass(frozen=True)
class HeuristicConfig:
    """Window sizes (in tokens) and the arrest default used by assembly."""

    pair_window: int = 3
    quantity_window: int = 2
    arrest_window: int = 5
    arrest_default: int = 1


_HEURISTIC_KEYS = ("pair_window", "quantity_window", "arrest_window", "arrest_default")


def load_heuristics(path: str | Path) -> HeuristicConfig:
    """Read a key=value heuristics file; unknown keys are rejected."""
    values: dict[str, int] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _HEURISTIC_KEYS:
            raise ValueError(f"{path}:{lineno}: expected one of {_HEURISTIC_KEYS}, got {raw!r}")
        try:
            values[key] = int(value.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {value.strip()!r} is not an integer") from exc
    return HeuristicConfig(**values)


@dataclass(frozen=True)
class TraffickingEvent:
    """One extracted event; dated by its report's year and month.

    At least one of species, product or arrest_count is always present.
    """

    report_id: str
    year: int
    month: int
    country: str | None = None
    species: str | None = None
    product: str | None = None
    quantity: int | None = None
    weight_kg: float | None = None
    arrest_count: int | None = None
    sentence_index: int = 0


class _Shell:
    """Mutable event under construction for a single sentence."""

    __slots__ = ("species_span", "product_span", "quantity", "weight_kg", "country")

    def __init__(
        self,
        species_span: EntitySpan | None = None,
        product_span: EntitySpan | None = None,
    ) -> None:
        self.species_span = species_span
        self.product_span = product_span
        self.quantity: int | None = None
        self.weight_kg: float | None = None
        self.country: str | None = None

    def anchor_start(self) -> int:
        starts = [s.start_char for s in (self.species_span, self.product_span) if s]
        return min(starts) if starts else -1

    def anchor_token_range(
        self, index: dict[EntitySpan, tuple[int, int]]
    ) -> tuple[int, int] | None:
        ranges = [index[s] for s in (self.species_span, self.product_span) if s]
        if not ranges:
            return None
        return min(r[0] for r in ranges), max(r[1] for r in ranges)


def _token_range(sentence: SentenceSpan, span: EntitySpan) -> tuple[int, int]:
    # first and last token index overlapped by the span
    indices = [
        i
        for i, tok in enumerate(sentence.tokens)
        if tok.start_char < span.end_char and span.start_char < tok.end_char
    ]
    if not indices:
        raise ValueError(f"span {span!r} covers no token of its sentence")
    return indices[0], indices[-1]


def _interval_distance(a: tuple[int, int], b: tuple[int, int]) -> int:
    # token distance between two inclusive index ranges; 0 when they touch
    if a[1] < b[0]:
        return b[0] - a[1]
    if b[1] < a[0]:
        return a[0] - b[1]
    return 0


def _spans_in_sentence(spans: Sequence[EntitySpan], sentence: SentenceSpan) -> list[EntitySpan]:
    return [
        s
        for s in spans
        if sentence.start_char <= s.start_char and s.end_char <= sentence.end_char
    ]


def assemble(
    doc: ReportDocument,
    spans: Iterable[EntitySpan],
    config: HeuristicConfig = HeuristicConfig(),
) -> list[TraffickingEvent]:
    """Turn annotated spans into events, sentence order then left to right."""
    all_spans = sorted(spans, key=lambda s: (s.start_char, s.end_char))

    # paragraph fallback for country attribution
    paragraph_countries: dict[int, list[EntitySpan]] = {}
    for span in all_spans:
        if span.label != COUNTRY:
            continue
        for pi, (start, end) in enumerate(doc.paragraphs):
            if start <= span.start_char < end:
                paragraph_countries.setdefault(pi, []).append(span)
                break

    events: list[TraffickingEvent] = []
    for si, sentence in enumerate(doc.sentences):
        sentence_spans = _spans_in_sentence(all_spans, sentence)
        animals = [s for s in sentence_spans if s.label == ANIMAL]
        products = [s for s in sentence_spans if s.label == PRODUCT]
        cardinals = [s for s in sentence_spans if s.label == CARDINAL]
        weights = [s for s in sentence_spans if s.label == WEIGHT]
        countries = [s for s in sentence_spans if s.label == COUNTRY]

        if not animals and not products and not has_arrest_lexeme(sentence):
            continue

        token_index = {s: _token_range(sentence, s) for s in sentence_spans}

        shells = _build_shells(animals, products, token_index, config.pair_window)
        if not shells:
            shells = [_Shell()]

        consumed = _attach_quantities(shells, cardinals, token_index, config.quantity_window)
        _attach_weights(shells, weights, token_index)
        _attach_countries(shells, countries, token_index)

        arrest = detect_arrest_count(
            sentence,
            window=config.arrest_window,
            default=config.arrest_default,
            exclude=consumed,
        )

        paragraph_fallback: str | None = None
        if not countries:
            pi = doc.paragraph_index_of(sentence)
            fallback_spans = paragraph_countries.get(pi)
            if fallback_spans:
                paragraph_fallback = fallback_spans[0].canonical

        for shell in shells:
            events.append(
                TraffickingEvent(
                    report_id=doc.report_id,
                    year=doc.year,
                    month=doc.month,
                    country=shell.country or paragraph_fallback,
                    species=shell.species_span.canonical if shell.species_span else None,
                    product=shell.product_span.canonical if shell.product_span else None,
                    quantity=shell.quantity,
                    weight_kg=shell.weight_kg,
                    arrest_count=arrest,
                    sentence_index=si,
                )
            )
    return events


def _build_shells(
    animals: list[EntitySpan],
    products: list[EntitySpan],
    token_index: dict[EntitySpan, tuple[int, int]],
    pair_window: int,
) -> list[_Shell]:
    shells: list[_Shell] = []
    modifier_animals: set[EntitySpan] = set()
    for product in products:
        p_first = token_index[product][0]
        best: EntitySpan | None = None
        best_last = -1
        for animal in animals:
            a_last = token_index[animal][1]
            if a_last < p_first and p_first - a_last <= pair_window and a_last > best_last:
                best = animal
                best_last = a_last
        if best is not None:
            modifier_animals.add(best)
        shells.append(_Shell(species_span=best, product_span=product))
    for animal in animals:
        if animal not in modifier_animals:
            shells.append(_Shell(species_span=animal))
    shells.sort(key=_Shell.anchor_start)
    return shells


def _attach_quantities(
    shells: list[_Shell],
    cardinals: list[EntitySpan],
    token_index: dict[EntitySpan, tuple[int, int]],
    quantity_window: int,
) -> set[EntitySpan]:
    """Attach item counts; returns the cardinals consumed as quantities."""
    used: set[EntitySpan] = set()
    for shell in shells:
        best: EntitySpan | None = None
        best_last = -1
        for anchor in (shell.species_span, shell.product_span):
            if anchor is None:
                continue
            a_first = token_index[anchor][0]
            for cardinal in cardinals:
                if cardinal in used or int(cardinal.canonical) < 1:
                    continue
                c_last = token_index[cardinal][1]
                gap = a_first - c_last
                if 1 <= gap <= quantity_window and c_last > best_last:
                    best = cardinal
                    best_last = c_last
        if best is not None:
            shell.quantity = int(best.canonical)
            used.add(best)
    return used


def _attach_weights(
    shells: list[_Shell],
    weights: list[EntitySpan],
    token_index: dict[EntitySpan, tuple[int, int]],
) -> None:
    for weight in weights:
        w_range = token_index[weight]
        best: _Shell | None = None
        best_distance: int | None = None
        for shell in shells:
            if shell.weight_kg is not None:
                continue
            anchor = shell.anchor_token_range(token_index)
            distance = 0 if anchor is None else _interval_distance(w_range, anchor)
            if best_distance is None or distance < best_distance:
                best = shell
                best_distance = distance
        if best is not None:
            best.weight_kg = float(weight.canonical)


def _attach_countries(
    shells: list[_Shell],
    countries: list[EntitySpan],
    token_index: dict[EntitySpan, tuple[int, int]],
) -> None:
    if not countries:
        return
    for shell in shells:
        anchor = shell.anchor_token_range(token_index)
        if anchor is None:
            shell.country = countries[0].canonical
            continue
        best = min(
            countries,
            key=lambda c: (_interval_distance(token_index[c], anchor), c.start_char),
        )
        shell.country = best.canonical

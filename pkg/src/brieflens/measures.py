"""Parsing counts, weights and arrest mentions out of token streams.

Numbers come in two shapes: digit strings with optional thousands
separators ("1,200") and English number words composed from units, teens,
tens and the hundred/thousand multipliers ("twenty-five", "three hundred
and six").  Values outside 0..999,999 are not recognised.

Weights are a number immediately followed by a unit token and are always
normalised to kilograms.  Arrest detection looks for a small closed set of
arrest lexemes and takes the nearest standalone number within a token
window; a lexeme with no number nearby means a single arrest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import SentenceSpan, Token
from .matcher import CARDINAL, WEIGHT, EntitySpan

__all__ = [
    "ARREST_LEXEMES",
    "MAX_NUMBER",
    "NumberMatch",
    "Weight",
    "detect_arrest_count",
    "has_arrest_lexeme",
    "numeric_spans",
    "parse_number",
    "parse_weights",
]

MAX_NUMBER = 999_999

_UNITS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9,
}
_TEENS = {
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}
_SMALL = {"zero": 0, **_UNITS, **_TEENS}

# unit token -> kilograms per unit; grams divide to stay exact for integers
_KG_UNITS = frozenset({"kg", "kilogram", "kilograms", "kilo", "kilos"})
_TON_UNITS = frozenset({"t", "ton", "tons", "tonne", "tonnes"})
_GRAM_UNITS = frozenset({"g", "gram", "grams"})
_POUND_UNITS = frozenset({"lb", "lbs", "pound", "pounds"})
WEIGHT_UNIT_TOKENS = _KG_UNITS | _TON_UNITS | _GRAM_UNITS | _POUND_UNITS

_POUND_KG = 0.45359237

ARREST_LEXEMES = frozenset(
    {"arrest", "arrested", "arrests", "apprehended", "detained", "jailed"}
)


@dataclass(frozen=True)
class NumberMatch:
    """A parsed number and the token span it consumed."""

    value: int
    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class Weight:
    """A weight normalised to kilograms, keeping the surface value and unit."""

    value_kg: float
    original_value: float
    original_unit: str


def _texts(tokens: Sequence[Token | str]) -> list[str]:
    return [t.lower if isinstance(t, Token) else str(t).casefold() for t in tokens]


def _parse_digits(texts: Sequence[str], i: int) -> NumberMatch | None:
    tok = texts[i]
    if not tok.isdigit():
        return None
    value = int(tok)
    if value > MAX_NUMBER:
        return None
    length = 1
    if len(tok) <= 3:
        j = i + 1
        while (
            j + 1 < len(texts)
            and texts[j] == ","
            and texts[j + 1].isdigit()
            and len(texts[j + 1]) == 3
        ):
            candidate = value * 1000 + int(texts[j + 1])
            if candidate > MAX_NUMBER:
                break
            value = candidate
            length += 2
            j += 2
    return NumberMatch(value=value, start=i, length=length)


def _parse_below_hundred(texts: Sequence[str], i: int) -> tuple[int, int] | None:
    tok = texts[i]
    if tok in _SMALL:
        return _SMALL[tok], 1
    if tok in _TENS:
        if i + 1 < len(texts) and texts[i + 1] in _UNITS:
            return _TENS[tok] + _UNITS[texts[i + 1]], 2
        return _TENS[tok], 1
    if "-" in tok:
        tens, _, unit = tok.partition("-")
        if tens in _TENS and unit in _UNITS:
            return _TENS[tens] + _UNITS[unit], 1
    return None


def _parse_below_thousand(texts: Sequence[str], i: int) -> tuple[int, int] | None:
    tok = texts[i]
    if tok in _UNITS and i + 1 < len(texts) and texts[i + 1] == "hundred":
        value = _UNITS[tok] * 100
        length = 2
        j = i + 2
        if j < len(texts) and texts[j] == "and":
            rest = _parse_below_hundred(texts, j + 1) if j + 1 < len(texts) else None
            if rest is not None:
                return value + rest[0], length + 1 + rest[1]
            return value, length
        rest = _parse_below_hundred(texts, j) if j < len(texts) else None
        if rest is not None:
            return value + rest[0], length + rest[1]
        return value, length
    return _parse_below_hundred(texts, i)


def _parse_words(texts: Sequence[str], i: int) -> NumberMatch | None:
    below = _parse_below_thousand(texts, i)
    if below is None:
        return None
    value, length = below
    j = i + length
    if j < len(texts) and texts[j] == "thousand" and value > 0:
        value *= 1000
        length += 1
        j += 1
        rest = _parse_below_thousand(texts, j) if j < len(texts) else None
        if rest is not None:
            value += rest[0]
            length += rest[1]
    if value > MAX_NUMBER:
        return None
    return NumberMatch(value=value, start=i, length=length)


def parse_number(tokens: Sequence[Token | str], start: int = 0) -> NumberMatch | None:
    """Parse a number starting exactly at ``start``; None when nothing matches."""
    texts = _texts(tokens)
    if not 0 <= start < len(texts):
        return None
    return _parse_digits(texts, start) or _parse_words(texts, start)


def _iter_numbers(texts: Sequence[str]) -> list[NumberMatch]:
    matches: list[NumberMatch] = []
    i = 0
    while i < len(texts):
        m = _parse_digits(texts, i) or _parse_words(texts, i)
        if m is None:
            i += 1
        else:
            matches.append(m)
            i = m.end
    return matches


def _join_text(tokens: Sequence[Token], start: int, end: int) -> str:
    return " ".join(tok.text for tok in tokens[start:end])


def _to_kg(value: int, unit: str) -> float:
    if unit in _KG_UNITS:
        return float(value)
    if unit in _TON_UNITS:
        return value * 1000.0
    if unit in _GRAM_UNITS:
        return value / 1000.0
    if unit in _POUND_UNITS:
        return value * _POUND_KG
    raise ValueError(f"unknown weight unit {unit!r}")


def parse_weights(sentence: SentenceSpan) -> list[tuple[EntitySpan, Weight]]:
    """Find every ``<number> <unit>`` weight in the sentence.

    The span covers the number tokens plus the unit token; the canonical is
    the exact kilogram value via ``repr`` so it survives a string round
    trip without loss.
    """
    tokens = sentence.tokens
    texts = _texts(tokens)
    results: list[tuple[EntitySpan, Weight]] = []
    i = 0
    while i < len(tokens):
        m = _parse_digits(texts, i) or _parse_words(texts, i)
        if m is None:
            i += 1
            continue
        unit_index = m.end
        if unit_index < len(tokens) and texts[unit_index] in WEIGHT_UNIT_TOKENS and m.value > 0:
            kg = _to_kg(m.value, texts[unit_index])
            span = EntitySpan(
                start_char=tokens[m.start].start_char,
                end_char=tokens[unit_index].end_char,
                text=_join_text(tokens, m.start, unit_index + 1),
                label=WEIGHT,
                canonical=repr(kg),
            )
            results.append((span, Weight(kg, float(m.value), tokens[unit_index].text)))
            i = unit_index + 1
        else:
            i = m.end
    return results


def numeric_spans(sentence: SentenceSpan) -> list[EntitySpan]:
    """All numeric spans of a sentence: weights first, then leftover cardinals.

    A number consumed by a weight never doubles as a CARDINAL.
    """
    tokens = sentence.tokens
    texts = _texts(tokens)
    spans = [span for span, _ in parse_weights(sentence)]
    taken: set[int] = set()
    for span in spans:
        for idx, tok in enumerate(tokens):
            if tok.start_char >= span.start_char and tok.end_char <= span.end_char:
                taken.add(idx)
    for m in _iter_numbers(texts):
        if any(idx in taken for idx in range(m.start, m.end)):
            continue
        spans.append(
            EntitySpan(
                start_char=tokens[m.start].start_char,
                end_char=tokens[m.end - 1].end_char,
                text=_join_text(tokens, m.start, m.end),
                label=CARDINAL,
                canonical=str(m.value),
            )
        )
    spans.sort(key=lambda s: (s.start_char, s.end_char))
    return spans


def has_arrest_lexeme(sentence: SentenceSpan) -> bool:
    """True when any token of the sentence is an arrest lexeme."""
    return any(t in ARREST_LEXEMES for t in _texts(sentence.tokens))


def detect_arrest_count(
    sentence: SentenceSpan,
    window: int = 5,
    default: int = 1,
    exclude: Iterable[EntitySpan] = (),
) -> int | None:
    """Arrest count for a sentence, or None when no arrest lexeme occurs.

    The count is the nearest standalone number within ``window`` tokens of
    an arrest lexeme.  Numbers that belong to a weight are never
    candidates, nor are numbers covered by a span in ``exclude`` (the
    assembler passes cardinals already spoken for as item quantities).  A
    lexeme with no candidate in range yields ``default``.
    """
    tokens = sentence.tokens
    texts = _texts(tokens)
    lexeme_positions = [i for i, t in enumerate(texts) if t in ARREST_LEXEMES]
    if not lexeme_positions:
        return None

    skip_tokens: set[int] = set()
    excluded_spans = [span for span, _ in parse_weights(sentence)]
    excluded_spans.extend(exclude)
    for span in excluded_spans:
        for idx, tok in enumerate(tokens):
            if tok.start_char >= span.start_char and tok.end_char <= span.end_char:
                skip_tokens.add(idx)

    best: tuple[int, int, int] | None = None  # (distance, number start, value)
    for m in _iter_numbers(texts):
        if any(idx in skip_tokens for idx in range(m.start, m.end)):
            continue
        for pos in lexeme_positions:
            if m.start > pos:
                distance = m.start - pos
            elif m.end - 1 < pos:
                distance = pos - (m.end - 1)
            else:
                distance = 0
            if distance > window:
                continue
            key = (distance, m.start, m.value)
            if best is None or key < best:
                best = key
    if best is None:
        return default
    return best[2]

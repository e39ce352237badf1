"""Gazetteer lexicons for animals, products and countries.

A lexicon maps case-folded surface forms to a ``(label, canonical)`` pair,
where the canonical form is always lowercase and singular.  Files are plain
CSV with a ``surface,label,canonical`` header; the canonical column may be
left empty to default to the lowercased surface.  Loading auto-generates a
plural surface for every entry so that "tusk" and "tusks" both resolve to
the canonical "tusk".

Inflection is a deliberately small rule cascade rather than a general
English morphology engine.  The irregulars table carries three kinds of
entries: true irregular plurals (goose/geese), invariant nouns that are
their own plural (fish, ivory), and regular-looking words whose plural
would be ambiguous to invert by suffix rules alone (horse, tortoise).
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

__all__ = [
    "ANIMAL",
    "COUNTRY",
    "LEXICON_LABELS",
    "Lexicon",
    "LexiconEntry",
    "LexiconError",
    "PRODUCT",
    "load_lexicon",
    "merge_lexicons",
    "pluralize",
    "singularize",
]

ANIMAL = "ANIMAL"
PRODUCT = "PRODUCT"
COUNTRY = "COUNTRY"
LEXICON_LABELS = frozenset({ANIMAL, PRODUCT, COUNTRY})

LEXICON_HEADER = ("surface", "label", "canonical")

_VOWELS = "aeiou"

# singular -> plural.  Identity entries mark invariant (often mass) nouns.
IRREGULAR_PLURALS: dict[str, str] = {
    "goose": "geese",
    "mongoose": "mongooses",
    "mouse": "mice",
    "dormouse": "dormice",
    "ox": "oxen",
    "tooth": "teeth",
    "buffalo": "buffaloes",
    # suffix rules cannot invert these: the plural ends in "-ses" but the
    # singular ends in "-se", so they ride the irregulars table instead.
    "horse": "horses",
    "seahorse": "seahorses",
    "tortoise": "tortoises",
    "porpoise": "porpoises",
    # invariant nouns
    "bison": "bison",
    "deer": "deer",
    "fish": "fish",
    "grouse": "grouse",
    "ivory": "ivory",
    "meat": "meat",
    "moose": "moose",
    "sheep": "sheep",
    "species": "species",
    "wildebeest": "wildebeest",
}

_REVERSE_IRREGULARS: dict[str, str] = {v: k for k, v in IRREGULAR_PLURALS.items()}
# identity entries resolve to themselves; "horses" -> "horse" etc. win over
# the generic suffix rules because this table is consulted first.

_F_TO_VES: dict[str, str] = {"wolf": "wolves", "calf": "calves", "leaf": "leaves"}
_VES_TO_F: dict[str, str] = {v: k for k, v in _F_TO_VES.items()}

_ES_STEMS = ("ss", "x", "z", "ch", "sh")


def pluralize(singular: str) -> str:
    """Pluralize a lowercase singular noun; multi-word terms inflect the last word."""
    if " " in singular:
        head, _, last = singular.rpartition(" ")
        return f"{head} {pluralize(last)}"
    word = singular
    if word in IRREGULAR_PLURALS:
        return IRREGULAR_PLURALS[word]
    if len(word) >= 2 and word.endswith("y") and word[-2] not in _VOWELS:
        return word[:-1] + "ies"
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if word in _F_TO_VES:
        return _F_TO_VES[word]
    return word + "s"


def _singularize_word(word: str) -> str:
    if word in _REVERSE_IRREGULARS:
        return _REVERSE_IRREGULARS[word]
    if len(word) > 3 and word.endswith("ies"):
        return word[:-3] + "y"
    if word in _VES_TO_F:
        return _VES_TO_F[word]
    if word.endswith("es") and word[:-2].endswith(_ES_STEMS):
        return word[:-2]
    if word.endswith("ses"):
        return word[:-2]
    if word.endswith("s") and not word.endswith("ss"):
        return word[:-1]
    return word


def singularize(surface: str, lexicon: "Lexicon | None" = None) -> str:
    """Return the canonical singular for ``surface``.

    A lexicon hit answers directly from the stored canonical; otherwise the
    inverse of the pluralization cascade is applied to the case-folded
    surface, last word only for multi-word terms.
    """
    key = surface.casefold()
    if lexicon is not None:
        hit = lexicon.lookup(key)
        if hit is not None:
            return hit[1]
    if " " in key:
        head, _, last = key.rpartition(" ")
        return f"{head} {_singularize_word(last)}"
    return _singularize_word(key)


class LexiconError(ValueError):
    """Raised for unreadable rows, unknown labels or conflicting surfaces."""


@dataclass(frozen=True)
class LexiconEntry:
    """One explicit lexicon row, with provenance for diagnostics."""

    surface: str
    label: str
    canonical: str
    origin: str = ""


@dataclass(frozen=True)
class Lexicon:
    """Immutable surface table: case-folded surface -> (label, canonical)."""

    entries: Mapping[str, tuple[str, str]]
    version: str
    n_rows: int = 0

    def __contains__(self, surface: str) -> bool:
        return surface.casefold() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def lookup(self, surface: str) -> tuple[str, str] | None:
        return self.entries.get(surface.casefold())

    def canonicals(self, label: str | None = None) -> set[str]:
        """Distinct canonical forms, optionally restricted to one label."""
        return {
            canonical
            for lbl, canonical in self.entries.values()
            if label is None or lbl == label
        }

    @classmethod
    def from_rows(cls, rows: Iterable[LexiconEntry | tuple], version: str = "") -> "Lexicon":
        """Build a lexicon from explicit rows and auto-generated plurals.

        Explicit rows conflict when the same case-folded surface maps to two
        different (label, canonical) pairs.  Auto-generated plural surfaces
        never override an explicit row; two auto plurals that disagree are a
        conflict as well.
        """
        normalized: list[LexiconEntry] = []
        for row in rows:
            if isinstance(row, LexiconEntry):
                normalized.append(row)
            else:
                surface, label, *rest = row
                canonical = rest[0] if rest and rest[0] else ""
                normalized.append(LexiconEntry(surface, label, canonical))

        explicit: dict[str, tuple[str, str]] = {}
        origin_of: dict[str, str] = {}
        for entry in normalized:
            if entry.label not in LEXICON_LABELS:
                raise LexiconError(
                    f"unknown label {entry.label!r} for surface {entry.surface!r}"
                    + (f" at {entry.origin}" if entry.origin else "")
                )
            key = entry.surface.casefold()
            canonical = (entry.canonical or entry.surface).casefold()
            pair = (entry.label, canonical)
            if key in explicit and explicit[key] != pair:
                raise LexiconError(
                    f"surface {entry.surface!r} maps to both {explicit[key]} "
                    f"(from {origin_of[key] or 'earlier row'}) and {pair}"
                    + (f" (from {entry.origin})" if entry.origin else "")
                )
            explicit[key] = pair
            origin_of.setdefault(key, entry.origin)

        table = dict(explicit)
        for key, pair in explicit.items():
            plural = pluralize(key)
            if plural == key:
                continue
            if plural in explicit:
                continue
            if plural in table and table[plural] != pair:
                raise LexiconError(
                    f"auto-generated plural {plural!r} is ambiguous: "
                    f"{table[plural]} vs {pair}"
                )
            table[plural] = pair

        if not version:
            digest = hashlib.sha256(repr(sorted(table.items())).encode("utf-8"))
            version = digest.hexdigest()[:16]
        return cls(entries=table, version=version, n_rows=len(normalized))


def _read_rows(text: str, origin: str) -> list[LexiconEntry]:
    rows: list[LexiconEntry] = []
    header_seen = False
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        if not row or not any(cell.strip() for cell in row):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        cells = [cell.strip() for cell in row]
        if not header_seen:
            if tuple(cells[:3]) != LEXICON_HEADER:
                raise LexiconError(
                    f"{origin}:{lineno}: expected header "
                    f"{','.join(LEXICON_HEADER)!r}, got {','.join(cells)!r}"
                )
            header_seen = True
            continue
        if len(cells) < 2 or not cells[0]:
            raise LexiconError(f"{origin}:{lineno}: need at least surface and label")
        surface, label = cells[0], cells[1]
        canonical = cells[2] if len(cells) > 2 else ""
        rows.append(LexiconEntry(surface, label, canonical, origin=f"{origin}:{lineno}"))
    # a file with no content at all is a valid empty lexicon; only data
    # without the header line is an error (handled above on the first row)
    return rows


def load_lexicon(path: str | Path) -> Lexicon:
    """Load one lexicon CSV; the version is a digest of the file bytes."""
    path = Path(path)
    data = path.read_bytes()
    rows = _read_rows(data.decode("utf-8"), origin=path.name)
    version = hashlib.sha256(data).hexdigest()[:16]
    return Lexicon.from_rows(rows, version=version)


def merge_lexicons(lexicons: Iterable[Lexicon]) -> Lexicon:
    """Merge lexicons into one surface table; cross-file conflicts are errors."""
    merged: dict[str, tuple[str, str]] = {}
    versions: list[str] = []
    n_rows = 0
    for lex in lexicons:
        versions.append(lex.version)
        n_rows += lex.n_rows
        for key, pair in lex.entries.items():
            if key in merged and merged[key] != pair:
                raise LexiconError(
                    f"surface {key!r} maps to both {merged[key]} and {pair} across lexicons"
                )
            merged[key] = pair
    version = hashlib.sha256("+".join(versions).encode("utf-8")).hexdigest()[:16]
    return Lexicon(entries=merged, version=version, n_rows=n_rows)

"""Embedded relational store for extracted events.

Two tables: ``reports`` keyed by report id, and ``events`` referencing
them.  Ingestion replaces whole reports, so re-extracting a brief never
duplicates its events.  The CSV interchange format is fixed:

    report_id,year,month,country,species,product,quantity,weight_kg,arrest_count

with empty strings for absent fields and weights rendered with at most six
decimal places, trailing zeros trimmed.
"""

from __future__ import annotations

import csv
import hashlib
import io
import sqlite3
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .assembler import TraffickingEvent

__all__ = [
    "CSV_COLUMNS",
    "CSV_HEADER",
    "CsvFormatError",
    "EventStore",
    "SchemaError",
    "StoreError",
    "SummaryStats",
    "format_weight",
    "import_csv",
]

CSV_HEADER = "report_id,year,month,country,species,product,quantity,weight_kg,arrest_count"
CSV_COLUMNS = tuple(CSV_HEADER.split(","))


class StoreError(Exception):
    """Raised when the backing database cannot be opened or written."""


class SchemaError(StoreError):
    """Raised for constraint violations, such as events of unknown reports."""


class CsvFormatError(ValueError):
    """Raised for a bad header or unparseable row in the interchange CSV."""


_SCHEMA = """
CREATE TABLE IF NOT EXISTS reports (
    report_id   TEXT PRIMARY KEY,
    year        INTEGER NOT NULL,
    month       INTEGER NOT NULL CHECK (month BETWEEN 1 AND 12),
    source_path TEXT NOT NULL DEFAULT ''
);
CREATE TABLE IF NOT EXISTS events (
    event_id       INTEGER PRIMARY KEY,
    report_id      TEXT NOT NULL REFERENCES reports(report_id),
    sentence_index INTEGER NOT NULL DEFAULT 0,
    country        TEXT,
    species        TEXT,
    product        TEXT,
    quantity       INTEGER CHECK (quantity IS NULL OR quantity >= 1),
    weight_kg      REAL    CHECK (weight_kg IS NULL OR weight_kg > 0),
    arrest_count   INTEGER CHECK (arrest_count IS NULL OR arrest_count >= 0)
);
CREATE INDEX IF NOT EXISTS events_by_report ON events(report_id);
"""


def format_weight(kg: float) -> str:
    """Render a weight with at most six decimals, trailing zeros trimmed."""
    text = f"{kg:.6f}".rstrip("0").rstrip(".")
    return text or "0"


@dataclass(frozen=True)
class SummaryStats:
    """Aggregates over the (optionally filtered) event table."""

    total_events: int
    total_arrests: int
    distinct_species: int
    per_country: dict[str, int] = field(default_factory=dict)
    per_month: dict[tuple[int, int], int] = field(default_factory=dict)
    top_species: list[tuple[str, int]] = field(default_factory=list)


class EventStore:
    """Single-writer event database; pass ":memory:" for an ephemeral store."""

    def __init__(self, path: str | Path = ":memory:") -> None:
        try:
            self._conn = sqlite3.connect(str(path))
            self._conn.execute("PRAGMA foreign_keys = ON")
            self._conn.executescript(_SCHEMA)
            self._conn.commit()
        except sqlite3.Error as exc:
            raise StoreError(f"cannot open event store at {path}: {exc}") from exc
        self.path = str(path)

    def close(self) -> None:
        self._conn.close()

    def __enter__(self) -> "EventStore":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def register_report(
        self, report_id: str, year: int, month: int, source_path: str = ""
    ) -> None:
        """Insert or update one report row."""
        try:
            self._conn.execute(
                "INSERT INTO reports (report_id, year, month, source_path)"
                " VALUES (?, ?, ?, ?)"
                " ON CONFLICT(report_id) DO UPDATE SET"
                " year = excluded.year, month = excluded.month,"
                " source_path = excluded.source_path",
                (report_id, year, month, source_path),
            )
            self._conn.commit()
        except sqlite3.IntegrityError as exc:
            raise SchemaError(f"cannot register report {report_id!r}: {exc}") from exc
        except sqlite3.Error as exc:
            raise StoreError(str(exc)) from exc

    def has_report(self, report_id: str) -> bool:
        row = self._conn.execute(
            "SELECT 1 FROM reports WHERE report_id = ?", (report_id,)
        ).fetchone()
        return row is not None

    def report_date(self, report_id: str) -> tuple[int, int] | None:
        row = self._conn.execute(
            "SELECT year, month FROM reports WHERE report_id = ?", (report_id,)
        ).fetchone()
        return (row[0], row[1]) if row else None

    def ingest(self, events: Sequence[TraffickingEvent]) -> int:
        """Replace all stored events of the affected reports with ``events``.

        Ingesting the same batch twice leaves the store unchanged.  Every
        event must reference a registered report and agree with its date.
        """
        events = list(events)
        for event in events:
            if event.species is None and event.product is None and event.arrest_count is None:
                raise SchemaError(
                    f"event in {event.report_id!r} has no species, product or arrest count"
                )
            known = self.report_date(event.report_id)
            if known is None:
                raise SchemaError(
                    f"event references unknown report {event.report_id!r};"
                    " register the report first"
                )
            if known != (event.year, event.month):
                raise SchemaError(
                    f"event date {(event.year, event.month)} disagrees with report"
                    f" {event.report_id!r} registered as {known}"
                )
        affected = sorted({e.report_id for e in events})
        try:
            with self._conn:
                for report_id in affected:
                    self._conn.execute(
                        "DELETE FROM events WHERE report_id = ?", (report_id,)
                    )
                self._conn.executemany(
                    "INSERT INTO events (report_id, sentence_index, country, species,"
                    " product, quantity, weight_kg, arrest_count)"
                    " VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                    [
                        (
                            e.report_id,
                            e.sentence_index,
                            e.country,
                            e.species,
                            e.product,
                            e.quantity,
                            e.weight_kg,
                            e.arrest_count,
                        )
                        for e in events
                    ],
                )
        except sqlite3.IntegrityError as exc:
            raise SchemaError(f"event batch violates store constraints: {exc}") from exc
        except sqlite3.Error as exc:
            raise StoreError(str(exc)) from exc
        return len(events)

    def events(self) -> list[TraffickingEvent]:
        """All events in export order: report id, sentence index, insertion."""
        rows = self._conn.execute(
            "SELECT e.report_id, r.year, r.month, e.country, e.species, e.product,"
            " e.quantity, e.weight_kg, e.arrest_count, e.sentence_index"
            " FROM events e JOIN reports r ON r.report_id = e.report_id"
            " ORDER BY e.report_id, e.sentence_index, e.event_id"
        ).fetchall()
        return [
            TraffickingEvent(
                report_id=r[0],
                year=r[1],
                month=r[2],
                country=r[3],
                species=r[4],
                product=r[5],
                quantity=r[6],
                weight_kg=r[7],
                arrest_count=r[8],
                sentence_index=r[9],
            )
            for r in rows
        ]

    def export_csv(self, dest: str | Path | TextIO) -> int:
        """Write the interchange CSV; returns the number of data rows."""
        events = self.events()
        if hasattr(dest, "write"):
            return _write_csv(dest, events)
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            return _write_csv(handle, events)

    def content_hash(self) -> str:
        """Digest of the exported rows; identical stores hash identically."""
        buffer = io.StringIO()
        _write_csv(buffer, self.events())
        return hashlib.sha256(buffer.getvalue().encode("utf-8")).hexdigest()[:16]

    def summarize(
        self,
        country: str | None = None,
        year_min: int | None = None,
        year_max: int | None = None,
    ) -> SummaryStats:
        """Aggregate the store, optionally filtered by country and year range."""
        where = ["1 = 1"]
        params: list[object] = []
        if country is not None:
            where.append("e.country = ?")
            params.append(country)
        if year_min is not None:
            where.append("r.year >= ?")
            params.append(year_min)
        if year_max is not None:
            where.append("r.year <= ?")
            params.append(year_max)
        base = (
            " FROM events e JOIN reports r ON r.report_id = e.report_id WHERE "
            + " AND ".join(where)
        )
        q = self._conn.execute
        total_events, total_arrests, distinct_species = q(
            "SELECT COUNT(*), COALESCE(SUM(COALESCE(e.arrest_count, 0)), 0),"
            " COUNT(DISTINCT e.species)" + base,
            params,
        ).fetchone()
        per_country = {
            row[0]: row[1]
            for row in q(
                "SELECT e.country, COUNT(*)" + base + " AND e.country IS NOT NULL"
                " GROUP BY e.country ORDER BY e.country",
                params,
            )
        }
        per_month = {
            (row[0], row[1]): row[2]
            for row in q(
                "SELECT r.year, r.month, COUNT(*)" + base
                + " GROUP BY r.year, r.month ORDER BY r.year, r.month",
                params,
            )
        }
        top_species = [
            (row[0], row[1])
            for row in q(
                "SELECT e.species, COUNT(*)" + base + " AND e.species IS NOT NULL"
                " GROUP BY e.species ORDER BY COUNT(*) DESC, e.species",
                params,
            )
        ]
        return SummaryStats(
            total_events=total_events,
            total_arrests=total_arrests,
            distinct_species=distinct_species,
            per_country=per_country,
            per_month=per_month,
            top_species=top_species,
        )


def _write_csv(handle: TextIO, events: Iterable[TraffickingEvent]) -> int:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    count = 0
    for e in events:
        writer.writerow(
            [
                e.report_id,
                str(e.year),
                str(e.month),
                e.country or "",
                e.species or "",
                e.product or "",
                "" if e.quantity is None else str(e.quantity),
                "" if e.weight_kg is None else format_weight(e.weight_kg),
                "" if e.arrest_count is None else str(e.arrest_count),
            ]
        )
        count += 1
    return count


def _parse_int(value: str, column: str, row: int) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise CsvFormatError(f"row {row}: {column} {value!r} is not an integer") from exc


def import_csv(source: str | Path | TextIO) -> list[TraffickingEvent]:
    """Read the interchange CSV back into events.

    The header must match exactly; empty cells become absent fields.  Events
    read this way have no sentence provenance, so sentence_index is 0.
    """
    if hasattr(source, "read"):
        return _read_csv(source)
    with open(source, "r", encoding="utf-8", newline="") as handle:
        return _read_csv(handle)


def _read_csv(handle: TextIO) -> list[TraffickingEvent]:
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError(f"missing header; expected {CSV_HEADER!r}") from None
    if tuple(header) != CSV_COLUMNS:
        raise CsvFormatError(f"bad header {','.join(header)!r}; expected {CSV_HEADER!r}")
    events: list[TraffickingEvent] = []
    for i, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise CsvFormatError(f"row {i}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
        (report_id, year, month, country, species, product, quantity, weight, arrests) = row
        month_value = _parse_int(month, "month", i)
        if not 1 <= month_value <= 12:
            raise CsvFormatError(f"row {i}: month {month_value} outside 1..12")
        quantity_value = _parse_int(quantity, "quantity", i) if quantity else None
        if quantity_value is not None and quantity_value < 1:
            raise CsvFormatError(f"row {i}: quantity must be at least 1")
        arrest_value = _parse_int(arrests, "arrest_count", i) if arrests else None
        if arrest_value is not None and arrest_value < 0:
            raise CsvFormatError(f"row {i}: arrest_count must not be negative")
        weight_value: float | None = None
        if weight:
            try:
                weight_value = float(weight)
            except ValueError as exc:
                raise CsvFormatError(f"row {i}: weight_kg {weight!r} is not a number") from exc
            if weight_value <= 0:
                raise CsvFormatError(f"row {i}: weight_kg must be positive")
        events.append(
            TraffickingEvent(
                report_id=report_id,
                year=_parse_int(year, "year", i),
                month=month_value,
                country=country or None,
                species=species or None,
                product=product or None,
                quantity=quantity_value,
                weight_kg=weight_value,
                arrest_count=arrest_value,
            )
        )
    return events

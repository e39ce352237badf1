"""Event store: ingestion rules, CSV interchange and aggregation."""

from __future__ import annotations

import io
import random
from dataclasses import replace

import pytest

from brieflens.assembler import TraffickingEvent
from brieflens.store import (
    CSV_HEADER,
    CsvFormatError,
    EventStore,
    SchemaError,
    format_weight,
    import_csv,
)


def ev(report_id="a-2021-01", year=2021, month=1, **kwargs):
    defaults = dict(species="elephant")
    defaults.update(kwargs)
    return TraffickingEvent(report_id=report_id, year=year, month=month, **defaults)


@pytest.fixture()
def store():
    with EventStore() as s:
        s.register_report("a-2021-01", 2021, 1)
        s.register_report("b-2021-02", 2021, 2)
        yield s


SAMPLE = [
    ev(sentence_index=1, species="pangolin", weight_kg=12.5),
    ev("b-2021-02", month=2, species=None, product="ivory",
       country="togo", weight_kg=513.0, arrest_count=1),
    ev(country="gabon", product="tusk", quantity=2, arrest_count=3),
]

GOLDEN_CSV = (
    "report_id,year,month,country,species,product,quantity,weight_kg,arrest_count\n"
    "a-2021-01,2021,1,gabon,elephant,tusk,2,,3\n"
    "a-2021-01,2021,1,,pangolin,,,12.5,\n"
    "b-2021-02,2021,2,togo,,ivory,,513,1\n"
)


class TestIngest:
    def test_round_trip_preserves_fields(self, store):
        assert store.ingest(SAMPLE) == 3
        stored = store.events()
        # export order: report id, then sentence index
        assert [e.sentence_index for e in stored] == [0, 1, 0]
        assert stored[0] == SAMPLE[2]
        assert stored[1] == SAMPLE[0]
        assert stored[2] == SAMPLE[1]

    def test_reingest_is_idempotent(self, store):
        store.ingest(SAMPLE)
        first = store.content_hash()
        store.ingest(SAMPLE)
        assert store.events() == sorted(
            SAMPLE, key=lambda e: (e.report_id, e.sentence_index)
        )
        assert store.content_hash() == first

    def test_reingest_replaces_only_its_report(self, store):
        store.ingest(SAMPLE)
        store.ingest([ev(species="leopard")])
        kept = store.events()
        assert [(e.report_id, e.species) for e in kept] == [
            ("a-2021-01", "leopard"),
            ("b-2021-02", None),
        ]

    def test_unknown_report_rejected(self, store):
        with pytest.raises(SchemaError, match="unknown report"):
            store.ingest([ev("nope-2021-01")])

    def test_date_mismatch_rejected(self, store):
        with pytest.raises(SchemaError, match="disagrees"):
            store.ingest([ev(month=6)])

    def test_empty_event_rejected(self, store):
        hollow = ev(species=None, product=None, arrest_count=None, country="gabon")
        with pytest.raises(SchemaError, match="no species, product or arrest"):
            store.ingest([hollow])

    def test_constraint_violation_rolls_back_whole_batch(self, store):
        store.ingest(SAMPLE)
        before = store.content_hash()
        bad = [ev(species="leopard"), ev(quantity=0)]
        with pytest.raises(SchemaError, match="constraint"):
            store.ingest(bad)
        assert store.content_hash() == before

    def test_register_report_updates_date(self, store):
        assert store.report_date("a-2021-01") == (2021, 1)
        store.register_report("a-2021-01", 2022, 3)
        assert store.report_date("a-2021-01") == (2022, 3)
        assert not store.has_report("zz-2020-01")

    def test_file_backed_store_persists(self, tmp_path):
        path = tmp_path / "events.db"
        with EventStore(path) as s:
            s.register_report("a-2021-01", 2021, 1)
            s.ingest([ev()])
        with EventStore(path) as s:
            assert [e.species for e in s.events()] == ["elephant"]


class TestCsvExport:
    def test_golden_output(self, store):
        store.ingest(SAMPLE)
        buffer = io.StringIO()
        assert store.export_csv(buffer) == 3
        assert buffer.getvalue() == GOLDEN_CSV

    def test_empty_store_exports_header_only(self):
        with EventStore() as s:
            buffer = io.StringIO()
            assert s.export_csv(buffer) == 0
            assert buffer.getvalue() == CSV_HEADER + "\n"

    def test_export_to_path(self, store, tmp_path):
        store.ingest(SAMPLE)
        out = tmp_path / "events.csv"
        store.export_csv(out)
        assert out.read_text(encoding="utf-8") == GOLDEN_CSV

    @pytest.mark.parametrize(
        "kg,text",
        [
            (513.0, "513"),
            (0.5, "0.5"),
            (2000.0, "2000"),
            (0.90718474, "0.907185"),
            (12.345, "12.345"),
            (1e-9, "0"),
        ],
    )
    def test_format_weight(self, kg, text):
        assert format_weight(kg) == text

    def test_content_hash_tracks_content(self, store):
        store.ingest(SAMPLE)
        twin = EventStore()
        twin.register_report("a-2021-01", 2021, 1)
        twin.register_report("b-2021-02", 2021, 2)
        twin.ingest(SAMPLE)
        assert twin.content_hash() == store.content_hash()
        twin.ingest([ev(species="leopard")])
        assert twin.content_hash() != store.content_hash()
        twin.close()


class TestCsvImport:
    def test_round_trip(self, store):
        store.ingest(SAMPLE)
        events = import_csv(io.StringIO(GOLDEN_CSV))
        assert events == [replace(e, sentence_index=0) for e in store.events()]

    def test_header_only_is_empty(self):
        assert import_csv(io.StringIO(CSV_HEADER + "\n")) == []

    def test_blank_lines_skipped(self):
        events = import_csv(io.StringIO(CSV_HEADER + "\n\na-2021-01,2021,1,,,ivory,,,\n"))
        assert len(events) == 1 and events[0].product == "ivory"

    @pytest.mark.parametrize(
        "content,message",
        [
            ("", "missing header"),
            ("report,year\na,b\n", "bad header"),
            (CSV_HEADER + "\na-2021-01,2021,1\n", "expected 9 fields"),
            (CSV_HEADER + "\na-2021-01,2021,0,,x,,,,\n", "outside 1..12"),
            (CSV_HEADER + "\na-2021-01,2021,13,,x,,,,\n", "outside 1..12"),
            (CSV_HEADER + "\na-2021-01,2021,1,,x,,0,,\n", "at least 1"),
            (CSV_HEADER + "\na-2021-01,2021,1,,x,,,-2,\n", "must be positive"),
            (CSV_HEADER + "\na-2021-01,2021,1,,x,,,heavy,\n", "not a number"),
            (CSV_HEADER + "\na-2021-01,2021,1,,x,,,,-1\n", "not be negative"),
            (CSV_HEADER + "\na-2021-01,20x1,1,,x,,,,\n", "not an integer"),
        ],
    )
    def test_malformed_input_rejected(self, content, message):
        with pytest.raises(CsvFormatError, match=message):
            import_csv(io.StringIO(content))


WORDS = ("elephant", "pangolin", "leopard", None)
PRODUCTS = ("ivory", "tusk", "skin", None)
COUNTRIES = ("gabon", "togo", "congo", None)


def random_event(rng, report_id, year, month, sentence_index):
    while True:
        species = rng.choice(WORDS)
        product = rng.choice(PRODUCTS)
        arrest = rng.choice((None, 0, 1, rng.randint(2, 40)))
        if species or product or arrest is not None:
            break
    # weights live on a three-decimal grid so text round trips are exact
    weight = None if rng.random() < 0.4 else rng.randint(1, 10_000_000) / 1000
    return TraffickingEvent(
        report_id=report_id,
        year=year,
        month=month,
        country=rng.choice(COUNTRIES),
        species=species,
        product=product,
        quantity=rng.choice((None, 1, rng.randint(2, 900))),
        weight_kg=weight,
        arrest_count=arrest,
        sentence_index=sentence_index,
    )


class TestRoundTripProperty:
    def test_export_import_identity(self):
        rng = random.Random(777)
        for trial in range(60):
            with EventStore() as s:
                events = []
                for r in range(rng.randint(1, 4)):
                    rid = f"r{r}-2021-0{r + 1}"
                    s.register_report(rid, 2021, r + 1)
                    for si in range(rng.randint(0, 5)):
                        events.append(random_event(rng, rid, 2021, r + 1, si))
                s.ingest(events)
                buffer = io.StringIO()
                s.export_csv(buffer)
                buffer.seek(0)
                imported = import_csv(buffer)
                assert imported == [
                    replace(e, sentence_index=0) for e in s.events()
                ], f"trial {trial}"


class TestSummarize:
    def seed(self, s):
        s.register_report("a-2021-01", 2021, 1)
        s.register_report("b-2021-02", 2021, 2)
        s.ingest(
            [
                ev(country="gabon", arrest_count=3),
                ev(country="gabon", species="pangolin", arrest_count=1, sentence_index=1),
                ev("b-2021-02", month=2, country="togo", species=None, product="ivory"),
            ]
        )

    def test_overall_totals(self):
        with EventStore() as s:
            self.seed(s)
            stats = s.summarize()
        assert stats.total_events == 3
        assert stats.total_arrests == 4
        assert stats.distinct_species == 2
        assert stats.per_country == {"gabon": 2, "togo": 1}
        assert stats.per_month == {(2021, 1): 2, (2021, 2): 1}
        assert stats.top_species == [("elephant", 1), ("pangolin", 1)]

    def test_country_filter(self):
        with EventStore() as s:
            self.seed(s)
            stats = s.summarize(country="gabon")
        assert (stats.total_events, stats.total_arrests) == (2, 4)
        assert stats.per_country == {"gabon": 2}

    def test_year_filter(self):
        with EventStore() as s:
            self.seed(s)
            s.register_report("c-2019-12", 2019, 12)
            s.ingest([ev("c-2019-12", year=2019, month=12, species="leopard")])
            assert s.summarize().total_events == 4
            assert s.summarize(year_min=2020).total_events == 3
            assert s.summarize(year_max=2019).total_events == 1
            assert s.summarize(year_min=2020, year_max=2020).total_events == 0

    def test_matches_naive_recount(self):
        rng = random.Random(4242)
        with EventStore() as s:
            events = []
            for r in range(4):
                rid = f"r{r}-202{r % 2}-0{r + 3}"
                s.register_report(rid, 2020 + r % 2, r + 3)
                for si in range(rng.randint(1, 6)):
                    events.append(random_event(rng, rid, 2020 + r % 2, r + 3, si))
            s.ingest(events)
            stats = s.summarize()
        assert stats.total_events == len(events)
        assert stats.total_arrests == sum(e.arrest_count or 0 for e in events)
        assert stats.distinct_species == len(
            {e.species for e in events if e.species is not None}
        )
        for country, count in stats.per_country.items():
            assert count == sum(1 for e in events if e.country == country)
        assert sum(stats.per_month.values()) == len(events)
        recount = sorted(
            (
                (-sum(1 for e in events if e.species == name), name)
                for name in {e.species for e in events if e.species}
            ),
        )
        assert stats.top_species == [(name, -neg) for neg, name in recount]

"""Phrase matching against the brute-force leftmost-longest oracle."""

from __future__ import annotations

import random

from brieflens.corpus import document_from_text
from brieflens.lexicon import Lexicon
from brieflens.matcher import (
    CARDINAL,
    CompiledMatcher,
    EntitySpan,
    compile_lexicon,
    find_entities,
    merge_spans,
)

from oracles import naive_leftmost_longest, random_matcher_case


def doc_of(text: str):
    return document_from_text("case-2021-01", 2021, 1, text)


class TestCompile:
    def test_empty_lexicon_matches_nothing(self):
        matcher = compile_lexicon(Lexicon.from_rows([]))
        assert find_entities(doc_of("elephant tusks everywhere"), matcher) == []

    def test_case_insensitive(self):
        matcher = compile_lexicon(Lexicon.from_rows([("elephant", "ANIMAL", "")]))
        for text in ("Elephant", "ELEPHANT", "elephant"):
            spans = find_entities(doc_of(text), matcher)
            assert [s.canonical for s in spans] == ["elephant"]

    def test_version_carried(self):
        lexicon = Lexicon.from_rows([("tusk", "PRODUCT", "")])
        assert compile_lexicon(lexicon).lexicon_version == lexicon.version


class TestFindEntities:
    def test_longest_phrase_wins(self):
        lexicon = Lexicon.from_rows([("turtle", "ANIMAL", ""), ("sea turtle", "ANIMAL", "")])
        spans = find_entities(doc_of("a sea turtle"), lexicon_matcher := compile_lexicon(lexicon))
        assert [(s.text, s.label) for s in spans] == [("sea turtle", "ANIMAL")]
        # the shorter term still matches on its own
        spans = find_entities(doc_of("a turtle"), lexicon_matcher)
        assert [s.text for s in spans] == ["turtle"]

    def test_adjacent_entities(self, small_lexicon):
        matcher = compile_lexicon(small_lexicon)
        spans = find_entities(doc_of("seized elephant ivory"), matcher)
        assert [(s.text, s.label) for s in spans] == [
            ("elephant", "ANIMAL"),
            ("ivory", "PRODUCT"),
        ]

    def test_no_match_inside_words(self):
        matcher = compile_lexicon(Lexicon.from_rows([("scale", "PRODUCT", "")]))
        assert find_entities(doc_of("the situation escalates quickly"), matcher) == []

    def test_empty_text(self, small_lexicon):
        assert find_entities(doc_of(""), compile_lexicon(small_lexicon)) == []

    def test_plural_surface_keeps_singular_canonical(self, small_lexicon):
        matcher = compile_lexicon(small_lexicon)
        spans = find_entities(doc_of("two tusks"), matcher)
        assert [(s.text, s.canonical) for s in spans] == [("tusks", "tusk")]

    def test_offsets_slice_raw_text(self, small_lexicon):
        doc = doc_of("Gabon reported elephant ivory")
        for span in find_entities(doc, compile_lexicon(small_lexicon)):
            assert doc.raw_text[span.start_char : span.end_char] == span.text

    def test_spans_sorted_and_disjoint(self, shipped_matcher, make_doc):
        doc = make_doc("Elephant ivory and pangolin scales were found in Gabon.")
        spans = find_entities(doc, shipped_matcher)
        for left, right in zip(spans, spans[1:]):
            assert left.end_char <= right.start_char


class TestOracleEquivalence:
    def test_thousand_random_cases(self):
        rng = random.Random(20210406)
        for _ in range(1000):
            lexicon, text = random_matcher_case(rng)
            doc = doc_of(text)
            fast = find_entities(doc, compile_lexicon(lexicon))
            slow = naive_leftmost_longest(doc, lexicon)
            assert fast == slow

    def test_deterministic(self):
        rng = random.Random(7)
        lexicon, text = random_matcher_case(rng)
        doc = doc_of(text)
        matcher = compile_lexicon(lexicon)
        assert find_entities(doc, matcher) == find_entities(doc, matcher)


class TestMergeSpans:
    def _cardinal(self, start, end, text="3", value="3"):
        return EntitySpan(start, end, text, CARDINAL, value)

    def test_union_with_empty(self):
        numeric = [self._cardinal(0, 1)]
        assert merge_spans([], numeric) == numeric

    def test_lexical_wins_on_overlap(self):
        lexical = [EntitySpan(0, 8, "elephant", "ANIMAL", "elephant")]
        numeric = [self._cardinal(0, 8, "elephant", "8")]
        assert merge_spans(lexical, numeric) == lexical

    def test_disjoint_union_sorted(self):
        lexical = [EntitySpan(10, 14, "tusk", "PRODUCT", "tusk")]
        numeric = [self._cardinal(0, 1)]
        merged = merge_spans(lexical, numeric)
        assert [s.start_char for s in merged] == [0, 10]

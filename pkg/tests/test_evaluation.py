"""Scoring: eligibility, greedy matching, outcome taxonomy, aggregate report."""

from __future__ import annotations

import random

import pytest

from brieflens.assembler import TraffickingEvent
from brieflens.evaluation import (
    COMPARED_FIELDS,
    EvalOutcome,
    EvalReport,
    compute_report,
    default_eligibility,
    evaluate_corpus,
    field_agree,
    match_events,
    pair_score,
)
from brieflens.store import import_csv

from conftest import GOLD_CSV


def ev(report_id="r-2021-01", **kwargs):
    return TraffickingEvent(report_id=report_id, year=2021, month=1, **kwargs)


class TestFieldAgree:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            (None, None, True),
            (None, "gabon", False),
            ("gabon", None, False),
            ("gabon", "gabon", True),
            ("gabon", "togo", False),
            (2, 2, True),
            (2, 3, False),
            (513.0, 513.0, True),
            (513.0, 513.0000005, True),   # inside the weight tolerance
            (513.0, 513.1, False),
            (513.0, 500.0, False),
            (2, 2.0, True),
        ],
    )
    def test_pairs(self, a, b, expected):
        assert field_agree(a, b) is expected


class TestEligibility:
    def test_species_identity(self):
        assert default_eligibility(ev(species="elephant"), ev(species="elephant"))
        assert not default_eligibility(ev(species="elephant"), ev(species="leopard"))

    def test_product_identity_survives_species_disagreement(self):
        p = ev(species="elephant", product="skin")
        g = ev(species="leopard", product="skin")
        assert default_eligibility(p, g)

    def test_one_sided_species_is_not_identity(self):
        assert not default_eligibility(ev(species="elephant"), ev(product="ivory"))

    def test_arrest_only_fallback(self):
        assert default_eligibility(ev(arrest_count=3), ev(arrest_count=3))
        assert not default_eligibility(ev(arrest_count=3), ev(arrest_count=2))
        # the fallback applies only when neither side names what was trafficked
        assert not default_eligibility(ev(arrest_count=3), ev(species="elephant", arrest_count=3))


class TestMatchEvents:
    def scenario(self):
        gold = [
            ev(species="elephant", product="tusk", country="gabon", quantity=2, arrest_count=3),
            ev(species="pangolin", country="togo", quantity=5),
            ev(product="ivory"),
        ]
        predicted = [
            ev(species="elephant", product="tusk", country="gabon", quantity=2, arrest_count=3),
            ev(species="pangolin", country="togo", quantity=4),
            ev(species="leopard"),
        ]
        return predicted, gold

    def test_four_outcomes(self):
        predicted, gold = self.scenario()
        result = match_events(predicted, gold)
        assert result.report_id == "r-2021-01"
        assert result.pairs == ((0, 0), (1, 1))
        assert result.prediction_outcomes == (
            EvalOutcome.FULLY_CORRECT,
            EvalOutcome.PARTIALLY_CORRECT,
            EvalOutcome.UNRELATED,
        )
        assert result.undetected_gold == (2,)
        assert result.total_gold == 3

    def test_field_agreement_counts(self):
        predicted, gold = self.scenario()
        result = match_events(predicted, gold)
        assert dict(result.field_agreement) == {
            "arrest_count": 2,
            "country": 2,
            "product": 2,
            "species": 2,
            "quantity": 1,
            "weight_kg": 2,
        }

    def test_higher_score_wins_over_position(self):
        gold = [ev(species="elephant", quantity=2)]
        predicted = [ev(species="elephant"), ev(species="elephant", quantity=2)]
        result = match_events(predicted, gold)
        assert result.pairs == ((1, 0),)
        assert result.prediction_outcomes == (
            EvalOutcome.UNRELATED,
            EvalOutcome.FULLY_CORRECT,
        )

    def test_score_tie_prefers_earliest_prediction(self):
        gold = [ev(species="elephant", quantity=2)]
        predicted = [ev(species="elephant"), ev(species="elephant")]
        result = match_events(predicted, gold)
        assert result.pairs == ((0, 0),)

    def test_score_tie_prefers_earliest_gold(self):
        gold = [ev(species="elephant", quantity=2), ev(species="elephant", quantity=3)]
        predicted = [ev(species="elephant")]
        result = match_events(predicted, gold)
        assert result.pairs == ((0, 0),)
        assert result.undetected_gold == (1,)

    def test_mixed_reports_rejected(self):
        with pytest.raises(ValueError, match="several reports"):
            match_events([ev()], [ev(report_id="other-2021-01")])

    def test_no_predictions(self):
        gold = [ev(species="elephant"), ev(product="ivory"), ev(arrest_count=2)]
        result = match_events([], gold)
        assert result.prediction_outcomes == ()
        assert result.undetected_gold == (0, 1, 2)

    def test_empty_both_sides(self):
        result = match_events([], [])
        assert result.report_id == ""
        assert result.total_gold == 0


class TestEvaluateCorpus:
    def test_groups_by_report(self):
        predicted = [ev(species="elephant"), ev(report_id="b-2021-01", species="pangolin")]
        gold = [ev(species="elephant"), ev(report_id="c-2021-01", species="leopard")]
        results = evaluate_corpus(predicted, gold)
        assert [r.report_id for r in results] == ["b-2021-01", "c-2021-01", "r-2021-01"]
        report = compute_report(results)
        assert report.fully_correct == 1  # the elephant report matches itself
        assert report.unrelated == 1      # pangolin report has no gold
        assert report.undetected == 1     # leopard report has no predictions
        assert report.total_gold == 2

    def test_gold_corpus_is_its_own_perfect_prediction(self):
        gold = import_csv(GOLD_CSV)
        assert len(gold) == 7
        report = compute_report(evaluate_corpus(gold, gold))
        assert report.fully_correct == 7
        assert report.partially_correct == report.unrelated == report.undetected == 0
        assert report.detection_rate == 1.0

    def test_self_identity_property(self):
        rng = random.Random(99)
        species = ("elephant", "pangolin", None)
        products = ("ivory", "skin", None)
        events = []
        for i in range(120):
            while True:
                s, p = rng.choice(species), rng.choice(products)
                arrest = rng.choice((None, 0, 3))
                if s or p or arrest is not None:
                    break
            events.append(
                ev(
                    report_id=f"r{i % 7}-2021-01",
                    species=s,
                    product=p,
                    arrest_count=arrest,
                    country=rng.choice(("gabon", None)),
                    quantity=rng.choice((None, 2)),
                    weight_kg=rng.choice((None, 12.5)),
                )
            )
        report = compute_report(evaluate_corpus(events, events))
        assert report.fully_correct == len(events)
        assert report.undetected == 0 and report.unrelated == 0

    def test_adding_the_missing_prediction_raises_detection(self):
        gold = [ev(species="elephant"), ev(species="pangolin")]
        partial = compute_report(evaluate_corpus([gold[0]], gold))
        full = compute_report(evaluate_corpus(gold, gold))
        assert partial.detected_gold == 1
        assert full.detected_gold == 2
        assert full.detection_rate > partial.detection_rate


class TestEvalReport:
    def test_from_published_counts(self):
        report = EvalReport.from_counts(15, 36, 39, 38, 85)
        assert report.detected_gold == 47
        assert report.total_predictions == 90
        assert abs(report.detection_rate - 0.5529) <= 1e-4
        assert report.counts_line() == (
            "fully=15 partial=36 unrelated=39 undetected=38 total_gold=85"
        )
        assert report.machine_lines() == [
            "fully=15",
            "partial=36",
            "unrelated=39",
            "undetected=38",
            "total_gold=85",
            "detected_gold=47",
            "detection_rate=0.552941",
        ]

    def test_machine_lines_include_field_agreement(self):
        predicted, gold = TestMatchEvents().scenario()
        report = compute_report([match_events(predicted, gold)])
        lines = report.machine_lines()
        assert lines[-len(COMPARED_FIELDS):] == [
            "agree_arrest_count=2",
            "agree_country=2",
            "agree_product=2",
            "agree_species=2",
            "agree_quantity=1",
            "agree_weight_kg=2",
        ]

    def test_partition_identities(self):
        predicted, gold = TestMatchEvents().scenario()
        report = compute_report([match_events(predicted, gold)])
        assert report.detected_gold + report.undetected == report.total_gold
        assert (
            report.fully_correct + report.partially_correct + report.unrelated
            == report.total_predictions
        )
        matched = report.fully_correct + report.partially_correct
        assert matched == report.detected_gold

    def test_zero_gold_rate_is_zero(self):
        assert EvalReport.from_counts(0, 0, 0, 0, 0).detection_rate == 0.0


class TestPairScore:
    def test_counts_agreeing_fields(self):
        a = ev(species="elephant", quantity=2)
        b = ev(species="elephant", quantity=3)
        # arrest, country, product, weight all absent on both sides
        assert pair_score(a, b) == 5
        assert pair_score(a, a) == 6

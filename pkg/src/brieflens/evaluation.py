"""Scoring extracted events against gold annotations.

Predictions and gold events are matched one-to-one within each report.  A
pair is eligible when its species values are present and equal, or its
product values are present and equal; records that carry neither species
nor product (arrest-only events) are instead eligible when their arrest
counts are present and equal.  Matching is greedy on the number of
agreeing fields among arrest count, country, product, species, quantity
and weight, with ties broken towards the earliest prediction and then the
earliest gold event.

Matched predictions are FULLY_CORRECT when all six fields agree and
PARTIALLY_CORRECT otherwise; unmatched predictions are UNRELATED and
unmatched gold events are UNDETECTED.  The detection rate is the share of
gold events that were matched at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

from .assembler import TraffickingEvent

__all__ = [
    "COMPARED_FIELDS",
    "EvalOutcome",
    "EvalReport",
    "GoldEvent",
    "MatchResult",
    "WEIGHT_TOLERANCE_KG",
    "compute_report",
    "default_eligibility",
    "evaluate_corpus",
    "field_agree",
    "match_events",
]

# gold annotations use the same record shape as extracted events
GoldEvent = TraffickingEvent

COMPARED_FIELDS = ("arrest_count", "country", "product", "species", "quantity", "weight_kg")

WEIGHT_TOLERANCE_KG = 1e-6


class EvalOutcome(Enum):
    FULLY_CORRECT = "fully_correct"
    PARTIALLY_CORRECT = "partially_correct"
    UNRELATED = "unrelated"
    UNDETECTED = "undetected"


def field_agree(a: object, b: object) -> bool:
    """True when both values are absent, or both present and equal.

    Weights compare within ``WEIGHT_TOLERANCE_KG``; strings and integers
    compare exactly.
    """
    if a is None and b is None:
        return True
    if a is None or b is None:
        return False
    if isinstance(a, float) or isinstance(b, float):
        return abs(float(a) - float(b)) <= WEIGHT_TOLERANCE_KG
    return a == b


def _both_equal(a: object, b: object) -> bool:
    return a is not None and b is not None and field_agree(a, b)


def default_eligibility(predicted: TraffickingEvent, gold: TraffickingEvent) -> bool:
    """Whether a pair may be matched at all.

    Identity comes from what was trafficked; for records with no species
    and no product on either side, the arrest count takes over that role.
    """
    if _both_equal(predicted.species, gold.species):
        return True
    if _both_equal(predicted.product, gold.product):
        return True
    if (
        predicted.species is None
        and predicted.product is None
        and gold.species is None
        and gold.product is None
    ):
        return _both_equal(predicted.arrest_count, gold.arrest_count)
    return False


def pair_score(predicted: TraffickingEvent, gold: TraffickingEvent) -> int:
    """Number of agreeing fields among the six compared ones."""
    return sum(
        1
        for name in COMPARED_FIELDS
        if field_agree(getattr(predicted, name), getattr(gold, name))
    )


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching one report's predictions against its gold events."""

    report_id: str
    pairs: tuple[tuple[int, int], ...]
    prediction_outcomes: tuple[EvalOutcome, ...]
    undetected_gold: tuple[int, ...]
    total_gold: int
    field_agreement: Mapping[str, int] = field(default_factory=dict)


def match_events(
    predicted: Sequence[TraffickingEvent],
    gold: Sequence[TraffickingEvent],
    eligible: Callable[[TraffickingEvent, TraffickingEvent], bool] = default_eligibility,
) -> MatchResult:
    """Greedy one-to-one matching for a single report."""
    report_ids = {e.report_id for e in predicted} | {e.report_id for e in gold}
    if len(report_ids) > 1:
        raise ValueError(f"match_events got events from several reports: {sorted(report_ids)}")
    report_id = report_ids.pop() if report_ids else ""

    candidates: list[tuple[int, int, int]] = []  # (-score, pred idx, gold idx)
    for pi, p in enumerate(predicted):
        for gi, g in enumerate(gold):
            if eligible(p, g):
                candidates.append((-pair_score(p, g), pi, gi))
    candidates.sort()

    matched_pred: dict[int, int] = {}
    matched_gold: set[int] = set()
    for _, pi, gi in candidates:
        if pi in matched_pred or gi in matched_gold:
            continue
        matched_pred[pi] = gi
        matched_gold.add(gi)

    agreement = {name: 0 for name in COMPARED_FIELDS}
    outcomes: list[EvalOutcome] = []
    for pi, p in enumerate(predicted):
        if pi not in matched_pred:
            outcomes.append(EvalOutcome.UNRELATED)
            continue
        g = gold[matched_pred[pi]]
        agreeing = [
            name for name in COMPARED_FIELDS if field_agree(getattr(p, name), getattr(g, name))
        ]
        for name in agreeing:
            agreement[name] += 1
        outcomes.append(
            EvalOutcome.FULLY_CORRECT
            if len(agreeing) == len(COMPARED_FIELDS)
            else EvalOutcome.PARTIALLY_CORRECT
        )

    return MatchResult(
        report_id=report_id,
        pairs=tuple(sorted((pi, gi) for pi, gi in matched_pred.items())),
        prediction_outcomes=tuple(outcomes),
        undetected_gold=tuple(gi for gi in range(len(gold)) if gi not in matched_gold),
        total_gold=len(gold),
        field_agreement=agreement,
    )


def evaluate_corpus(
    predicted: Iterable[TraffickingEvent],
    gold: Iterable[TraffickingEvent],
    eligible: Callable[[TraffickingEvent, TraffickingEvent], bool] = default_eligibility,
) -> list[MatchResult]:
    """Group both sides by report id and match report by report."""
    by_report_pred: dict[str, list[TraffickingEvent]] = {}
    by_report_gold: dict[str, list[TraffickingEvent]] = {}
    for e in predicted:
        by_report_pred.setdefault(e.report_id, []).append(e)
    for e in gold:
        by_report_gold.setdefault(e.report_id, []).append(e)
    results = []
    for report_id in sorted(by_report_pred.keys() | by_report_gold.keys()):
        results.append(
            match_events(
                by_report_pred.get(report_id, []),
                by_report_gold.get(report_id, []),
                eligible,
            )
        )
    return results


@dataclass(frozen=True)
class EvalReport:
    """Corpus-level outcome counts and the detection rate."""

    fully_correct: int
    partially_correct: int
    unrelated: int
    undetected: int
    total_gold: int
    field_agreement: Mapping[str, int] = field(default_factory=dict)

    @property
    def detected_gold(self) -> int:
        return self.total_gold - self.undetected

    @property
    def detection_rate(self) -> float:
        if self.total_gold == 0:
            return 0.0
        return self.detected_gold / self.total_gold

    @property
    def total_predictions(self) -> int:
        return self.fully_correct + self.partially_correct + self.unrelated

    @classmethod
    def from_counts(
        cls,
        fully_correct: int,
        partially_correct: int,
        unrelated: int,
        undetected: int,
        total_gold: int,
    ) -> "EvalReport":
        return cls(fully_correct, partially_correct, unrelated, undetected, total_gold)

    def counts_line(self) -> str:
        return (
            f"fully={self.fully_correct} partial={self.partially_correct}"
            f" unrelated={self.unrelated} undetected={self.undetected}"
            f" total_gold={self.total_gold}"
        )

    def machine_lines(self) -> list[str]:
        lines = [
            f"fully={self.fully_correct}",
            f"partial={self.partially_correct}",
            f"unrelated={self.unrelated}",
            f"undetected={self.undetected}",
            f"total_gold={self.total_gold}",
            f"detected_gold={self.detected_gold}",
            f"detection_rate={self.detection_rate:.6f}",
        ]
        for name in COMPARED_FIELDS:
            if name in self.field_agreement:
                lines.append(f"agree_{name}={self.field_agreement[name]}")
        return lines


def compute_report(results: Iterable[MatchResult]) -> EvalReport:
    """Aggregate per-report match results into one corpus report."""
    fully = partial = unrelated = undetected = total_gold = 0
    agreement = {name: 0 for name in COMPARED_FIELDS}
    for result in results:
        for outcome in result.prediction_outcomes:
            if outcome is EvalOutcome.FULLY_CORRECT:
                fully += 1
            elif outcome is EvalOutcome.PARTIALLY_CORRECT:
                partial += 1
            elif outcome is EvalOutcome.UNRELATED:
                unrelated += 1
        undetected += len(result.undetected_gold)
        total_gold += result.total_gold
        for name, count in result.field_agreement.items():
            agreement[name] = agreement.get(name, 0) + count
    return EvalReport(
        fully_correct=fully,
        partially_correct=partial,
        unrelated=unrelated,
        undetected=undetected,
        total_gold=total_gold,
        field_agreement=agreement,
    )

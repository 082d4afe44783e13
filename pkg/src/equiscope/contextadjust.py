"""Contextual adjustment and subjective peer-assessment handling.

Absence intervals and past grades become per-student adjustment factors applied
multiplicatively to the objective measures (never to raw metrics), clamped to the
configured band around 1.0. Absence compensates presence-linked scores only, i.e.
the Interaction dimension. Unadjusted values always remain in the report next to the
adjusted ones.

Peer-assessment items are mapped to benchmarks through the shipped label map
(case-insensitive exact match), bias-corrected by the ratio of the grand mean given
to the rater's mean given, and appended to the matched benchmark's metric mask. Items
that cannot be classified or attributed are routed to the advisor as free-text
evidence, never dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .evidence.types import ContextKind, ContextRecord, EvidenceBundle, PeerAssessmentItem
from .measures import DIMENSIONS, BaseMeasures, ObjectiveMeasures, WeightConfig
from .metricdefs import PA_METRIC_PREFIX
from .metrics.table import MetricTable
from .stats import interval_union_hours

PRESENCE_LINKED_DIMENSIONS = ("Interaction",)


def load_pa_label_map() -> dict[str, str]:
    raw = resources.files("equiscope.data").joinpath("pa_labels.json").read_text(encoding="utf-8")
    return {k.lower(): v for k, v in json.loads(raw).items()}


# -- adjustment factors ------------------------------------------------------


def absence_fraction(records: list[ContextRecord], bundle: EvidenceBundle) -> dict[str, float]:
    """Union length of each student's absence intervals over the project window."""
    window_hours = bundle.window_hours
    fractions: dict[str, float] = {s: 0.0 for s in bundle.roster_ids}
    by_student: dict[str, list] = {}
    for record in records:
        if record.kind is not ContextKind.ABSENCE or record.interval is None:
            continue
        start = max(record.interval[0], bundle.window_start)
        end = min(record.interval[1], bundle.window_end)
        if end > start:
            by_student.setdefault(record.student, []).append((start, end))
    for student, intervals in by_student.items():
        if student in fractions:
            fractions[student] = min(1.0, interval_union_hours(intervals) / window_hours)
    return fractions


def past_grade_ratios(records: list[ContextRecord], roster: list[str]) -> dict[str, float]:
    """Student mean past grade over the team mean; 1.0 for students without records."""
    grades: dict[str, list[float]] = {}
    for record in records:
        if record.kind is ContextKind.PAST_GRADE and record.value is not None and record.student in roster:
            grades.setdefault(record.student, []).append(record.value)
    means = {s: sum(v) / len(v) for s, v in grades.items()}
    if not means:
        return {s: 1.0 for s in roster}
    team_mean = sum(means.values()) / len(means)
    if team_mean <= 0:
        return {s: 1.0 for s in roster}
    return {s: (means[s] / team_mean if s in means else 1.0) for s in roster}


@dataclass
class AdjustmentFactor:
    student: str
    factor: float  # headline multiplier (the presence-linked one)
    absence_fraction: float
    past_grade_ratio: float
    per_dimension: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "student": self.student,
            "factor": self.factor,
            "absence_fraction": self.absence_fraction,
            "past_grade_ratio": self.past_grade_ratio,
            "per_dimension": dict(sorted(self.per_dimension.items())),
        }


def adjustment_factors(bundle: EvidenceBundle, config: WeightConfig) -> dict[str, AdjustmentFactor]:
    """Per-student clamped multipliers; exactly 1.0 everywhere without context records."""
    clamp = config.adjustment_clamp
    absences = absence_fraction(bundle.context_records, bundle)
    ratios = past_grade_ratios(bundle.context_records, bundle.roster_ids)

    def clamped(x: float) -> float:
        return min(1.0 + clamp, max(1.0 - clamp, x))

    factors: dict[str, AdjustmentFactor] = {}
    for student in bundle.roster_ids:
        a = absences[student]
        ratio = ratios[student]
        if a == 0.0 and ratio == 1.0:
            per_dimension = {d: 1.0 for d in DIMENSIONS}
            factors[student] = AdjustmentFactor(student, 1.0, 0.0, 1.0, per_dimension)
            continue
        # time lost to absence compensates as 1/(1-a) - 1, unbounded as a -> 1
        compensation = (1.0 / (1.0 - a) - 1.0) if a < 1.0 else float(2.0 / clamp)
        grade_term = config.past_grade_weight * (ratio - 1.0)
        presence_factor = clamped(1.0 + config.absence_weight * compensation + grade_term)
        base_factor = clamped(1.0 + grade_term)
        per_dimension = {
            d: (presence_factor if d in PRESENCE_LINKED_DIMENSIONS else base_factor) for d in DIMENSIONS
        }
        factors[student] = AdjustmentFactor(student, presence_factor, a, ratio, per_dimension)
    return factors


def apply_adjustment(
    base: BaseMeasures,
    objective: ObjectiveMeasures,
    factors: dict[str, AdjustmentFactor],
) -> tuple[BaseMeasures, ObjectiveMeasures]:
    """Scale measures by each student's per-dimension multiplier (benchmarks inherit
    their parent dimension's multiplier, so re-aggregation is consistent)."""
    from .measures import BENCHMARK_DIMENSION

    adjusted_base = BaseMeasures(
        values={
            s: {
                b: v * factors[s].per_dimension[BENCHMARK_DIMENSION[b]]
                for b, v in benchmarks.items()
            }
            for s, benchmarks in base.values.items()
        },
        used_metrics=base.used_metrics,
        neutral_benchmarks=base.neutral_benchmarks,
    )
    adjusted_objective = ObjectiveMeasures(
        values={
            s: {d: v * factors[s].per_dimension[d] for d, v in dims.items()}
            for s, dims in objective.values.items()
        }
    )
    return adjusted_base, adjusted_objective


# -- peer assessment ---------------------------------------------------------


@dataclass
class CorrectedRating:
    rater: str
    ratee: str
    benchmark: str
    raw: int
    corrected: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "rater": self.rater,
            "ratee": self.ratee,
            "benchmark": self.benchmark,
            "raw": self.raw,
            "corrected": self.corrected,
        }


@dataclass
class PAClassification:
    corrected: dict[str, list[CorrectedRating]] = field(default_factory=dict)  # benchmark -> ratings
    advisor_evidence: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "corrected": {b: [r.to_dict() for r in rs] for b, rs in sorted(self.corrected.items())},
            "advisor_evidence": self.advisor_evidence,
        }


def classify_pa(items: list[PeerAssessmentItem], label_map: dict[str, str] | None = None) -> PAClassification:
    """Sort PA items into benchmarks and bias-correct them; leftovers go to the advisor."""
    label_map = label_map if label_map is not None else load_pa_label_map()
    result = PAClassification()

    attributable = [i for i in items if i.rater is not None and i.ratee is not None]
    totals: dict[str, list[int]] = {}
    for item in attributable:
        totals.setdefault(item.rater, []).append(item.score)
    rater_means = {r: sum(v) / len(v) for r, v in totals.items()}
    all_scores = [i.score for i in attributable]
    grand_mean = sum(all_scores) / len(all_scores) if all_scores else 0.0

    for item in items:
        benchmark = label_map.get(item.category_label.lower())
        if benchmark is None or item.rater is None or item.ratee is None:
            result.advisor_evidence.append({
                "rater": item.rater or item.rater_alias,
                "ratee": item.ratee or item.ratee_alias,
                "category_label": item.category_label,
                "score": item.score,
                "comment": item.comment,
                "reason": "unmatched-label" if benchmark is None else "unresolved-participant",
            })
            continue
        rater_mean = rater_means[item.rater]
        corrected = item.score * (grand_mean / rater_mean) if rater_mean > 0 else float(item.score)
        result.corrected.setdefault(benchmark, []).append(
            CorrectedRating(item.rater, item.ratee, benchmark, item.score, corrected)
        )
    return result


def pa_metric_columns(classification: PAClassification, table: MetricTable) -> list[str]:
    """Install one pa_<benchmark> column per rated benchmark: mean corrected rating
    received. Unrated students get the team mean of rated values (neutral, support 0)."""
    added: list[str] = []
    for benchmark, ratings in sorted(classification.corrected.items()):
        received: dict[str, list[float]] = {}
        for rating in ratings:
            received.setdefault(rating.ratee, []).append(rating.corrected)
        values = {s: sum(v) / len(v) for s, v in received.items()}
        if not values:
            continue
        neutral = sum(values.values()) / len(values)
        metric_id = f"{PA_METRIC_PREFIX}{benchmark.lower()}"
        table.set_column(
            metric_id,
            {s: values.get(s, neutral) for s in table.roster},
            {s: len(received.get(s, [])) for s in table.roster},
        )
        added.append(metric_id)
    return added


def inject_pa_masks(config: WeightConfig, pa_metric_ids: list[str]) -> WeightConfig:
    """Blend each rated benchmark's mask with its PA metric at the configured weight."""
    if not pa_metric_ids or config.pa_weight <= 0:
        return config
    masks = {b: dict(m) for b, m in config.benchmark_masks.items()}
    for metric_id in pa_metric_ids:
        benchmark = metric_id[len(PA_METRIC_PREFIX):].capitalize()
        if benchmark not in masks:
            continue
        blended = {m: w * (1.0 - config.pa_weight) for m, w in masks[benchmark].items()}
        blended[metric_id] = config.pa_weight
        masks[benchmark] = blended
    from dataclasses import replace

    return replace(config, benchmark_masks=masks)

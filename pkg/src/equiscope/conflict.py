"""Inequality analysis per base measure: Gini index plus scenario A/B conflict markers.

Scenario A fires for a student sitting at least `d` standard deviations above the
team mean of a benchmark whose Gini reaches the threshold; scenario B mirrors it
below the mean. Both scenarios require high inequality: an outlier with low Gini is
arithmetically impossible for non-negative scores, so the below-average scenario is
implemented as high Gini + below-average score. That reading is recorded in every
report header.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .measures import BENCHMARK_DIMENSION, BENCHMARKS, BaseMeasures, WeightConfig
from .stats import mean, pstdev

SCENARIO_NOTE = (
    "Scenario B markers use high inequality (Gini >= threshold) together with a below-average "
    "score: an isolated low performance. The alternative low-inequality reading is arithmetically "
    "inconsistent with outlier detection on non-negative scores and is not used."
)

# (benchmark, scenario) -> implication shown to the instructor
IMPLICATIONS: dict[tuple[str, str], str] = {
    ("Quantity", "A"): "Overcentralisation in contribution. I.e., few members doing most of the work.",
    ("Quantity", "B"): "Social loafing. I.e., few members not carrying their weight.",
    ("Quality", "A"): "A team member with stronger skills and knowledge putting in disproportionately larger effort.",
    ("Quality", "B"): "Few students not matching the team competence standard.",
    ("Relevance", "A"): "A stronger understanding of the task that is not shared across the team.",
    ("Relevance", "B"): "Contributed in a way that wasn't as useful for the team.",
    ("Tone", "A"): "Professionalism and equal treatment in a team with cliques or negative communication.",
    ("Tone", "B"): "Team member who behaved more negatively compared to the remainder of the team.",
    ("Effectiveness", "A"): "Good communicator that kept the team on track.",
    ("Effectiveness", "B"): "Team members who communicated poorly compared to the rest of the team.",
    ("Presence", "A"): "High engagement in a more absent team.",
    ("Presence", "B"): "Uncooperative or absent team member.",
    ("Adherence", "A"): "Higher responsibility in a team with less stringent protocols for action.",
    ("Adherence", "B"): "Failure to follow agreed-upon and established distribution of work.",
    ("Organisation", "A"): "Taking the lead in structuring and coordination.",
    ("Organisation", "B"): "Lack of initiative and structure, failure to engage with organisational needs.",
    ("Support", "A"): "Extra effort to fulfil their role and help the team.",
    ("Support", "B"): "Low level of soft contribution and engagement.",
}


def gini(values: Sequence[float]) -> float:
    """Gini index over non-negative values: sum |xi - xj| / (2 n^2 mu); 0 for all-zero."""
    if len(values) < 2:
        raise ValueError("gini needs at least 2 values")
    if any(v < 0 for v in values):
        raise ValueError("gini is defined for non-negative values")
    total = sum(values)
    if total == 0.0:
        return 0.0
    n = len(values)
    diff_sum = sum(abs(a - b) for a in values for b in values)
    # algebraically diff_sum / (2 n^2 mu); n * total avoids mu underflowing to zero
    return diff_sum / (2 * n * total)


@dataclass
class InequalityStat:
    benchmark: str
    gini: float
    team_mean: float
    team_sd: float
    shifted: bool = False  # defensive non-negativity shift was applied

    def to_dict(self) -> dict[str, Any]:
        return {
            "benchmark": self.benchmark,
            "gini": self.gini,
            "team_mean": self.team_mean,
            "team_sd": self.team_sd,
            "shifted": self.shifted,
        }


@dataclass
class ConflictMarker:
    benchmark: str
    dimension: str
    scenario: str
    student: str
    gini: float
    deviation_sd: float
    implication_text: str
    evidence_refs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "benchmark": self.benchmark,
            "dimension": self.dimension,
            "scenario": self.scenario,
            "student": self.student,
            "gini": self.gini,
            "deviation_sd": self.deviation_sd,
            "implication_text": self.implication_text,
            "evidence_refs": sorted(self.evidence_refs),
        }


def inequality_stats(base: BaseMeasures) -> dict[str, InequalityStat]:
    stats: dict[str, InequalityStat] = {}
    for benchmark in BENCHMARKS:
        vector = base.benchmark_vector(benchmark)
        values = list(vector.values())
        shifted = False
        low = min(values)
        if low < 0:
            values = [v - low for v in values]
            shifted = True
        stats[benchmark] = InequalityStat(
            benchmark=benchmark,
            gini=gini(values),
            team_mean=mean(list(vector.values())),
            team_sd=pstdev(list(vector.values())),
            shifted=shifted,
        )
    return stats


def detect_markers(base: BaseMeasures, config: WeightConfig) -> tuple[list[ConflictMarker], dict[str, InequalityStat]]:
    """Fire scenario A/B markers per benchmark whose Gini reaches the threshold."""
    stats = inequality_stats(base)
    markers: list[ConflictMarker] = []
    for benchmark in BENCHMARKS:
        stat = stats[benchmark]
        if stat.gini < config.gini_threshold:
            continue
        # equal non-negative values give gini 0 < threshold, so spread must exist
        assert stat.team_sd > 0, f"gini {stat.gini} with zero spread on {benchmark}"
        vector = base.benchmark_vector(benchmark)
        for student in sorted(vector):
            deviation = (vector[student] - stat.team_mean) / stat.team_sd
            scenario = None
            if deviation >= config.deviation_threshold:
                scenario = "A"
            elif deviation <= -config.deviation_threshold:
                scenario = "B"
            if scenario is None:
                continue
            markers.append(
                ConflictMarker(
                    benchmark=benchmark,
                    dimension=BENCHMARK_DIMENSION[benchmark],
                    scenario=scenario,
                    student=student,
                    gini=stat.gini,
                    deviation_sd=deviation,
                    implication_text=IMPLICATIONS[(benchmark, scenario)],
                    evidence_refs=[f"metric:{m}" for m in base.used_metrics.get(benchmark, [])],
                )
            )
    markers.sort(key=lambda m: (m.dimension, m.benchmark, m.scenario, m.student))
    return markers, stats

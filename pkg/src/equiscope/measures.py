"""Normalisation and aggregation: team-relative rating, weighted masks, nine base
measures, three dimension measures, and the optional team-grade projection.

Normalised values are team-mean-relative with 1.0 meaning average. Lower-better
metrics are inverted with x' = (max + min) - x, which keeps values affine, bounded
and non-negative (a reciprocal would blow up near zero). Missing metrics are removed
from their mask with the remaining weights renormalised; a benchmark left with no
usable metric scores a neutral 1.0 and is flagged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .metricdefs import Orientation, is_known_metric, metric_def
from .metrics.submission import MediaWeights
from .metrics.table import MetricTable

BENCHMARKS = (
    "Quantity", "Quality", "Relevance",
    "Tone", "Effectiveness", "Presence",
    "Adherence", "Organisation", "Support",
)

DIMENSIONS = ("Contribution", "Interaction", "Role")

BENCHMARK_DIMENSION = {
    "Quantity": "Contribution", "Quality": "Contribution", "Relevance": "Contribution",
    "Tone": "Interaction", "Effectiveness": "Interaction", "Presence": "Interaction",
    "Adherence": "Role", "Organisation": "Role", "Support": "Role",
}

MASK_TOLERANCE = 1e-9

GRADE_VARIANTS = ("plain", "sqrt", "constant-sum")
SUBJECTIVE_MODES = ("measures", "advisor-only", "off")


def _equal_mask(metric_ids: tuple[str, ...]) -> dict[str, float]:
    return {m: 1.0 / len(metric_ids) for m in metric_ids}


def default_benchmark_masks() -> dict[str, dict[str, float]]:
    return {
        "Quantity": _equal_mask(("1a", "1b", "1c", "1d", "1i")),
        "Quality": _equal_mask(("1g", "1h", "quality_grade")),
        "Relevance": _equal_mask(("relevance_llm", "3d")),
        "Tone": _equal_mask(("2i",)),
        "Effectiveness": _equal_mask(("2b", "2g", "2d")),
        "Presence": _equal_mask(("2a", "2e", "2f", "3a", "3c")),
        "Adherence": _equal_mask(("deadline_adherence", "3e")),
        "Organisation": _equal_mask(("1f", "3b", "commit_msg_readability")),
        "Support": _equal_mask(("3f", "admin_task_share")),
    }


def default_dimension_masks() -> dict[str, dict[str, float]]:
    return {
        "Contribution": _equal_mask(("Quantity", "Quality", "Relevance")),
        "Interaction": _equal_mask(("Tone", "Effectiveness", "Presence")),
        "Role": _equal_mask(("Adherence", "Organisation", "Support")),
    }


@dataclass
class WeightConfig:
    benchmark_masks: dict[str, dict[str, float]] = field(default_factory=default_benchmark_masks)
    dimension_masks: dict[str, dict[str, float]] = field(default_factory=default_dimension_masks)
    gini_threshold: float = 0.3
    deviation_threshold: float = 1.0
    theta_match: float = 0.75
    media_weights: MediaWeights = field(default_factory=MediaWeights)
    adjustment_clamp: float = 0.15
    absence_weight: float = 0.5
    past_grade_weight: float = 0.5
    pa_weight: float = 0.25
    subjective_mode: str = "measures"
    expose_grade_projection: bool = False
    grade_variant: str = "plain"
    seed: int = 0
    provider: str | None = None
    retries: int = 1

    def validate(self) -> "WeightConfig":
        for name, mask in sorted(self.benchmark_masks.items()):
            path = f"benchmark_masks.{name}"
            if name not in BENCHMARKS:
                raise ConfigError(f"unknown benchmark (expected one of {list(BENCHMARKS)})", path)
            _check_mask(mask, path, is_known_metric, "metric")
        missing = [b for b in BENCHMARKS if b not in self.benchmark_masks]
        if missing:
            raise ConfigError(f"missing benchmark masks: {missing}", "benchmark_masks")
        for name, mask in sorted(self.dimension_masks.items()):
            path = f"dimension_masks.{name}"
            if name not in DIMENSIONS:
                raise ConfigError(f"unknown dimension (expected one of {list(DIMENSIONS)})", path)
            _check_mask(mask, path, lambda b: b in BENCHMARKS, "benchmark")
        missing = [d for d in DIMENSIONS if d not in self.dimension_masks]
        if missing:
            raise ConfigError(f"missing dimension masks: {missing}", "dimension_masks")
        if not 0.0 < self.gini_threshold < 1.0:
            raise ConfigError(f"must be in (0, 1), got {self.gini_threshold}", "gini_threshold")
        if self.deviation_threshold <= 0:
            raise ConfigError(f"must be positive, got {self.deviation_threshold}", "deviation_threshold")
        if not 0.0 <= self.theta_match <= 1.0:
            raise ConfigError(f"must be in [0, 1], got {self.theta_match}", "theta_match")
        if not 0.0 <= self.adjustment_clamp < 1.0:
            raise ConfigError(f"must be in [0, 1), got {self.adjustment_clamp}", "adjustment_clamp")
        if not 0.0 <= self.pa_weight < 1.0:
            raise ConfigError(f"must be in [0, 1), got {self.pa_weight}", "pa_weight")
        if self.subjective_mode not in SUBJECTIVE_MODES:
            raise ConfigError(f"must be one of {list(SUBJECTIVE_MODES)}", "subjective_mode")
        if self.grade_variant not in GRADE_VARIANTS:
            raise ConfigError(f"must be one of {list(GRADE_VARIANTS)}", "grade_variant")
        return self

    def to_dict(self) -> dict[str, Any]:
        return {
            "benchmark_masks": {k: dict(sorted(v.items())) for k, v in sorted(self.benchmark_masks.items())},
            "dimension_masks": {k: dict(sorted(v.items())) for k, v in sorted(self.dimension_masks.items())},
            "gini_threshold": self.gini_threshold,
            "deviation_threshold": self.deviation_threshold,
            "theta_match": self.theta_match,
            "media_weights": {
                "image": self.media_weights.image,
                "other": self.media_weights.other,
                "per_page": self.media_weights.per_page,
                "per_minute": self.media_weights.per_minute,
            },
            "adjustment_clamp": self.adjustment_clamp,
            "absence_weight": self.absence_weight,
            "past_grade_weight": self.past_grade_weight,
            "pa_weight": self.pa_weight,
            "subjective_mode": self.subjective_mode,
            "expose_grade_projection": self.expose_grade_projection,
            "grade_variant": self.grade_variant,
            "seed": self.seed,
            "provider": self.provider,
            "retries": self.retries,
        }

    @classmethod
    def from_dict(cls, overrides: Mapping[str, Any]) -> "WeightConfig":
        """Defaults overridden by the given entries; masks are replaced wholesale."""
        config = cls()
        simple = {
            "gini_threshold", "deviation_threshold", "theta_match", "adjustment_clamp",
            "absence_weight", "past_grade_weight", "pa_weight", "subjective_mode",
            "expose_grade_projection", "grade_variant", "seed", "provider", "retries",
        }
        unknown = set(overrides) - simple - {"benchmark_masks", "dimension_masks", "media_weights"}
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}", "config")
        kwargs: dict[str, Any] = {k: overrides[k] for k in simple if k in overrides}
        if "media_weights" in overrides:
            mw = overrides["media_weights"]
            kwargs["media_weights"] = MediaWeights(
                image=float(mw.get("image", 1.0)),
                other=float(mw.get("other", 1.0)),
                per_page=float(mw.get("per_page", 1.0)),
                per_minute=float(mw.get("per_minute", 1.0)),
            )
        config = replace(config, **kwargs)
        if "benchmark_masks" in overrides:
            masks = dict(config.benchmark_masks)
            for name, mask in overrides["benchmark_masks"].items():
                masks[name] = {str(m): float(w) for m, w in mask.items()}
            config.benchmark_masks = masks
        if "dimension_masks" in overrides:
            masks = dict(config.dimension_masks)
            for name, mask in overrides["dimension_masks"].items():
                masks[name] = {str(m): float(w) for m, w in mask.items()}
            config.dimension_masks = masks
        return config.validate()

    @classmethod
    def from_file(cls, path: Path | str) -> "WeightConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"unreadable config file: {exc}", str(path)) from exc
        return cls.from_dict(data)


def _check_mask(mask: Mapping[str, float], path: str, known, kind: str) -> None:
    if not mask:
        raise ConfigError("mask is empty", path)
    for key, weight in sorted(mask.items()):
        if not known(key):
            raise ConfigError(f"unknown {kind} id {key!r}", f"{path}.{key}")
        if weight < 0:
            raise ConfigError(f"negative weight {weight}", f"{path}.{key}")
    total = sum(mask.values())
    if abs(total - 1.0) > MASK_TOLERANCE:
        raise ConfigError(f"weights sum to {total!r}, expected 1 within {MASK_TOLERANCE}", path)


# -- normalisation -----------------------------------------------------------


def autorate(values: Mapping[str, float], orientation: Orientation = Orientation.HIGHER) -> dict[str, float]:
    """Team-mean-relative rating: value / team mean, after inverting lower-better input.

    A degenerate column (mean zero after inversion) rates everyone a neutral 1.0.
    """
    if len(values) < 2:
        raise ValueError("autorate needs at least 2 students")
    keys = list(values)
    raw = [float(values[k]) for k in keys]
    if orientation is Orientation.LOWER:
        pivot = max(raw) + min(raw)
        raw = [pivot - x for x in raw]
    mean = sum(raw) / len(raw)
    if mean == 0.0:
        return {k: 1.0 for k in keys}
    return {k: x / mean for k, x in zip(keys, raw)}


@dataclass
class NormalizedMetrics:
    """Team-relative values per available metric, plus the ids that were unusable."""

    values: dict[str, dict[str, float]] = field(default_factory=dict)
    unavailable: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "values": {m: dict(sorted(col.items())) for m, col in sorted(self.values.items())},
            "unavailable": sorted(self.unavailable),
        }


def normalize_metrics(table: MetricTable, metric_ids: set[str] | None = None) -> NormalizedMetrics:
    """Autorate every requested metric column, honouring fold/shift/zero-support rules."""
    ids = sorted(metric_ids) if metric_ids is not None else table.metric_ids()
    out = NormalizedMetrics()
    for metric_id in ids:
        if not table.has_metric(metric_id) or not table.available(metric_id):
            out.unavailable.append(metric_id)
            continue
        definition = metric_def(metric_id)
        col: dict[str, float] = {}
        for student in table.roster:
            value = table.value(metric_id, student)
            if definition.fold_abs:
                value = abs(value)
            col[student] = value + definition.shift
        if definition.orientation is Orientation.LOWER and definition.zero_support == "team_mean":
            supported = [col[s] for s in table.roster if table.support(metric_id, s) > 0]
            if supported:
                neutral = sum(supported) / len(supported)
                for student in table.roster:
                    if table.support(metric_id, student) == 0:
                        col[student] = neutral
        out.values[metric_id] = autorate(col, definition.orientation)
    return out


# -- aggregation -------------------------------------------------------------


@dataclass
class BaseMeasures:
    values: dict[str, dict[str, float]]  # student -> benchmark -> value
    used_metrics: dict[str, list[str]]  # benchmark -> metric ids actually aggregated
    neutral_benchmarks: list[str]  # benchmarks with no usable metric (scored 1.0)

    def benchmark_vector(self, benchmark: str) -> dict[str, float]:
        return {s: self.values[s][benchmark] for s in self.values}

    def to_dict(self) -> dict[str, Any]:
        return {
            "values": {s: dict(sorted(b.items())) for s, b in sorted(self.values.items())},
            "used_metrics": {b: sorted(m) for b, m in sorted(self.used_metrics.items())},
            "neutral_benchmarks": sorted(self.neutral_benchmarks),
        }


def aggregate_base(normalized: NormalizedMetrics, config: WeightConfig, roster: list[str]) -> BaseMeasures:
    values: dict[str, dict[str, float]] = {s: {} for s in roster}
    used: dict[str, list[str]] = {}
    neutral: list[str] = []
    for benchmark in BENCHMARKS:
        mask = config.benchmark_masks[benchmark]
        available = {m: w for m, w in mask.items() if m in normalized.values and w > 0}
        total_weight = sum(available.values())
        if not available or total_weight <= 0:
            neutral.append(benchmark)
            used[benchmark] = []
            for s in roster:
                values[s][benchmark] = 1.0
            continue
        used[benchmark] = sorted(available)
        for s in roster:
            values[s][benchmark] = sum(
                (w / total_weight) * normalized.values[m][s] for m, w in available.items()
            )
    return BaseMeasures(values=values, used_metrics=used, neutral_benchmarks=neutral)


@dataclass
class ObjectiveMeasures:
    values: dict[str, dict[str, float]]  # student -> dimension -> value

    def to_dict(self) -> dict[str, Any]:
        return {s: dict(sorted(d.items())) for s, d in sorted(self.values.items())}


def aggregate_objective(base: BaseMeasures, config: WeightConfig) -> ObjectiveMeasures:
    values: dict[str, dict[str, float]] = {}
    for student, benchmarks in base.values.items():
        values[student] = {}
        for dimension in DIMENSIONS:
            mask = config.dimension_masks[dimension]
            values[student][dimension] = sum(w * benchmarks[b] for b, w in mask.items())
    return ObjectiveMeasures(values=values)


# -- grade projection --------------------------------------------------------


def final_grade_projection(indiv_avg: float, team_avg: float, team_grade: float,
                           variant: str = "plain") -> float:
    """Project an individual grade from the team grade via the individual/team ratio."""
    if team_avg <= 0:
        return team_grade
    if variant == "sqrt":
        return (indiv_avg / team_avg) ** 0.5 * team_grade
    return indiv_avg * team_grade / team_avg


def project_grades(objective: ObjectiveMeasures, team_grade: float, variant: str = "plain") -> dict[str, float]:
    """Per-student projections from mean dimension scores; constant-sum rescales so the
    total is conserved at roster size x team grade."""
    indiv = {s: sum(d.values()) / len(d) for s, d in objective.values.items()}
    team_avg = sum(indiv.values()) / len(indiv)
    base_variant = "sqrt" if variant == "sqrt" else "plain"
    raw = {s: final_grade_projection(v, team_avg, team_grade, base_variant) for s, v in indiv.items()}
    if variant == "constant-sum":
        total = sum(raw.values())
        target = len(raw) * team_grade
        if total > 0:
            raw = {s: v * target / total for s, v in raw.items()}
        else:
            raw = {s: team_grade for s in raw}
    return raw

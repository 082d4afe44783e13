"""Deterministic prompt construction from versioned template files.

Templates are plain text with $-placeholders; the structured run data travels in a
fenced JSON data block rendered canonically, so identical inputs always produce
identical prompt bytes. The template version is recorded in every report.
"""

from __future__ import annotations

from importlib import resources
from string import Template
from typing import Any

from ..conflict import ConflictMarker
from ..measures import BENCHMARK_DIMENSION, BENCHMARKS, BaseMeasures, ObjectiveMeasures
from ..provider import ProviderRequest, build_request

TEMPLATE_VERSION = "v1"


def load_template(name: str, version: str = TEMPLATE_VERSION) -> str:
    path = resources.files("equiscope.advisor.templates").joinpath(version).joinpath(f"{name}.txt")
    return path.read_text(encoding="utf-8").strip()


def salient_features(
    dimension: str, base: BaseMeasures, markers: list[ConflictMarker], threshold: float = 0.25
) -> list[dict[str, Any]]:
    """Rule-based notables for one dimension: marked students plus large mean offsets."""
    features: list[dict[str, Any]] = []
    marked = {(m.benchmark, m.student) for m in markers if m.dimension == dimension}
    for benchmark in BENCHMARKS:
        if BENCHMARK_DIMENSION[benchmark] != dimension:
            continue
        for student in sorted(base.values):
            value = base.values[student][benchmark]
            offset = value - 1.0
            if (benchmark, student) in marked or abs(offset) >= threshold:
                direction = "high" if offset > 0 else "low"
                features.append({
                    "id": benchmark,
                    "student": student,
                    "direction": direction,
                    "note": f"{benchmark} at {value:.3f} against a team mean of 1.0",
                })
    return features


def build_local_prompt(
    dimension: str,
    base: BaseMeasures,
    markers: list[ConflictMarker],
    neutral_benchmarks: list[str],
) -> ProviderRequest:
    dim_markers = [m.to_dict() for m in markers if m.dimension == dimension]
    markers_line = (
        "No markers fired for this dimension."
        if not dim_markers
        else f"{len(dim_markers)} marker(s) fired for this dimension."
    )
    instruction = Template(load_template("local_instruction")).substitute(
        dimension=dimension, markers_line=markers_line
    )
    data = {
        "dimension": dimension,
        "benchmarks": {
            b: {s: base.values[s][b] for s in sorted(base.values)}
            for b in BENCHMARKS
            if BENCHMARK_DIMENSION[b] == dimension
        },
        "neutral_benchmarks": sorted(b for b in neutral_benchmarks if BENCHMARK_DIMENSION[b] == dimension),
        "markers": dim_markers,
        "salient_features": salient_features(dimension, base, markers),
    }
    return build_request("local_summary", load_template("local_system"), instruction, data)


def build_global_prompt(
    local_narratives: dict[str, str],
    objective: ObjectiveMeasures,
    markers: list[ConflictMarker],
    adjustments: dict[str, Any],
    pa_evidence: list[dict[str, Any]],
) -> ProviderRequest:
    data = {
        "local_summaries": dict(sorted(local_narratives.items())),
        "objective": objective.to_dict(),
        "markers": [m.to_dict() for m in markers],
        "adjustments": adjustments,
        "subjective_evidence": pa_evidence,
    }
    return build_request(
        "global_judgment", load_template("global_system"), load_template("global_instruction"), data,
        max_tokens=4096,
    )


def build_validate_prompt(claims: list[dict[str, Any]], digest: dict[str, Any]) -> ProviderRequest:
    data = {"claims": claims, "run_digest": digest}
    return build_request(
        "validate", load_template("validate_system"), load_template("validate_instruction"), data,
        max_tokens=4096,
    )

"""End-to-end analysis: bundle -> metrics -> measures -> markers -> advisory -> report.

The report body is a plain dict serialised canonically (sorted keys, 9 significant
digits) and contains no clocks, paths or run identifiers: identical bundle bytes,
configuration and provider behaviour produce byte-identical bodies. Run-specific
envelope data (ids, timestamps, transcript locations) lives outside the body.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from .abstract import compute_abstract
from .advisor import run_advisory
from .canonical import canonical_bytes, canonical_json
from .conflict import SCENARIO_NOTE, detect_markers
from .contextadjust import (
    adjustment_factors,
    apply_adjustment,
    classify_pa,
    inject_pa_masks,
    pa_metric_columns,
)
from .evidence import LoadResult, load_bundle
from .evidence.types import EvidenceBundle
from .measures import WeightConfig, aggregate_base, aggregate_objective, normalize_metrics, project_grades
from .metrics import conversation_metrics, coordination_metrics, submission_metrics
from .provider import Provider, get_provider
from .provider.transcript import RecordingProvider, TranscriptStore

SCHEMA_VERSION = 1


def analyze_bundle(
    bundle: EvidenceBundle,
    config: WeightConfig,
    provider: Provider,
    load_summary: dict[str, Any] | None = None,
    disable_context_adjust: bool = False,
) -> dict[str, Any]:
    """Produce the full report body for one bundle."""
    config.validate()
    roster = bundle.roster_ids

    table = submission_metrics(bundle, config.media_weights)
    table.merge(conversation_metrics(bundle))
    table.merge(coordination_metrics(bundle))

    abstract = compute_abstract(bundle, provider, config.theta_match, config.retries)
    table.merge(abstract.table)

    pa_section: dict[str, Any] = {"mode": config.subjective_mode, "corrected": {}, "advisor_evidence": []}
    masks_config = config
    if not disable_context_adjust and config.subjective_mode != "off" and bundle.pa_items:
        classification = classify_pa(bundle.pa_items)
        pa_section = {"mode": config.subjective_mode, **classification.to_dict()}
        if config.subjective_mode == "measures":
            added = pa_metric_columns(classification, table)
            masks_config = inject_pa_masks(config, added)
        else:  # advisor-only: corrected ratings inform the judgment, never the measures
            pa_section["advisor_evidence"] = pa_section["advisor_evidence"] + [
                r.to_dict() | {"reason": "subjective-mode-advisor-only"}
                for rs in classification.corrected.values()
                for r in rs
            ]

    normalized = normalize_metrics(table)
    base = aggregate_base(normalized, masks_config, roster)
    objective = aggregate_objective(base, masks_config)

    if disable_context_adjust:
        factors = {
            s: _neutral_factor(s) for s in roster
        }
    else:
        factors = adjustment_factors(bundle, config)
    adjusted_base, adjusted_objective = apply_adjustment(base, objective, factors)

    markers_pre, stats_pre = detect_markers(base, masks_config)
    markers_post, stats_post = detect_markers(adjusted_base, masks_config)

    summaries, judgment = run_advisory(
        roster=roster,
        table=table,
        base=base,
        objective=objective,
        markers=markers_pre,
        neutral_benchmarks=base.neutral_benchmarks,
        adjustments={s: f.to_dict() for s, f in sorted(factors.items())},
        pa_evidence=pa_section.get("advisor_evidence", []),
        provider=provider,
        retries=config.retries,
    )

    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "header": {
            "project_id": bundle.project_id,
            "window": bundle.to_dict()["project_window"],
            "roster": [s.to_dict() for s in bundle.roster],
            "team_grade": bundle.team_grade,
            "provider_id": provider.id,
            "notes": [SCENARIO_NOTE],
        },
        "config": config.to_dict(),
        "evidence_summary": load_summary or {},
        "metrics": table.to_dict(),
        "normalized": normalized.to_dict(),
        "base_measures": base.to_dict(),
        "objective_measures": objective.to_dict(),
        "inequality": {b: s.to_dict() for b, s in sorted(stats_pre.items())},
        "conflict_markers": [m.to_dict() for m in markers_pre],
        "adjusted": {
            "factors": {s: f.to_dict() for s, f in sorted(factors.items())},
            "base_measures": adjusted_base.to_dict(),
            "objective_measures": adjusted_objective.to_dict(),
            "inequality": {b: s.to_dict() for b, s in sorted(stats_post.items())},
            "conflict_markers": [m.to_dict() for m in markers_post],
        },
        "abstract": abstract.to_report_dict(),
        "pa": pa_section,
        "advisory": {
            "local_summaries": {d: s.to_dict() for d, s in sorted(summaries.items())},
            "judgment": judgment.to_dict(),
        },
        "grade_projection": None,
    }
    if config.expose_grade_projection:
        report["grade_projection"] = {
            "variant": config.grade_variant,
            "values": project_grades(objective, bundle.team_grade, config.grade_variant),
            "note": "Projection is advisory tooling output, not a grade decision.",
        }
    return report


def _neutral_factor(student: str):
    from .contextadjust import AdjustmentFactor
    from .measures import DIMENSIONS

    return AdjustmentFactor(student, 1.0, 0.0, 1.0, {d: 1.0 for d in DIMENSIONS})


def analyze_path(
    bundle_dir: Path | str,
    config: WeightConfig | None = None,
    provider: Provider | None = None,
    transcript_path: Path | str | None = None,
    disable_context_adjust: bool = False,
) -> tuple[dict[str, Any], LoadResult]:
    """Load a bundle directory and analyze it; wires transcript recording if asked."""
    config = config or WeightConfig()
    result = load_bundle(bundle_dir)
    inner = provider if provider is not None else get_provider(config.provider, seed=config.seed)
    if transcript_path is not None:
        inner = RecordingProvider(inner, TranscriptStore(transcript_path))
    report = analyze_bundle(
        result.bundle, config, inner,
        load_summary=result.summary(),
        disable_context_adjust=disable_context_adjust,
    )
    return report, result


def report_bytes(report: dict[str, Any]) -> bytes:
    return canonical_bytes(report)


def report_json(report: dict[str, Any]) -> str:
    return canonical_json(report)

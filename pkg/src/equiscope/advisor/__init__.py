"""Hierarchical advisory pipeline: local summaries, global judgment, validation."""

from __future__ import annotations

from typing import Any

from ..conflict import ConflictMarker
from ..measures import BaseMeasures, ObjectiveMeasures
from ..metrics.table import MetricTable
from ..provider import Provider
from .judgment import DISCLAIMER, Claim, LocalSummary, RawJudgment, global_judgment, local_summaries
from .prompts import TEMPLATE_VERSION, build_local_prompt
from .validate import AdvisoryJudgment, RunIndex, referential_check, validate_judgment


def run_advisory(
    roster: list[str],
    table: MetricTable,
    base: BaseMeasures,
    objective: ObjectiveMeasures,
    markers: list[ConflictMarker],
    neutral_benchmarks: list[str],
    adjustments: dict[str, Any],
    pa_evidence: list[dict[str, Any]],
    provider: Provider,
    retries: int = 1,
) -> tuple[dict[str, LocalSummary], AdvisoryJudgment]:
    """The full advisory stage. Local summaries degrade per dimension; the judgment is
    all-or-nothing behind its validation pass."""
    summaries = local_summaries(base, markers, neutral_benchmarks, provider, retries)
    raw = global_judgment(summaries, objective, markers, adjustments, pa_evidence, provider, retries)
    index = RunIndex.build(roster, table, base, objective, markers)
    judgment = validate_judgment(raw, index, markers, roster, provider, retries)
    return summaries, judgment


__all__ = [
    "AdvisoryJudgment",
    "Claim",
    "DISCLAIMER",
    "LocalSummary",
    "RawJudgment",
    "RunIndex",
    "TEMPLATE_VERSION",
    "build_local_prompt",
    "global_judgment",
    "local_summaries",
    "referential_check",
    "run_advisory",
    "validate_judgment",
]

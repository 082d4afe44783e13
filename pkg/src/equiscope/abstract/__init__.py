"""Provider-derived metrics: extraction, fidelity, diversity, quality, relevance.

The whole stage degrades gracefully: any provider failure marks the affected metric
columns unavailable (weights renormalise downstream) instead of failing the run.
Quality grading keeps its deterministic half even with no provider at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..errors import ProviderError
from ..evidence.types import EvidenceBundle
from ..metrics.table import MetricTable
from ..provider import Provider
from .extraction import Extraction, categorize_record_tasks, extract_structure
from .fidelity import StudentTask, merge_fidelity_metrics, unified_tasks
from .grading import AssessmentGuide, QualityGrade, artifact_type, fetch_guide, quality_columns
from .relevance import HypotheticalDoc, hypothetical_documents, relevance_column

ABSTRACT_METRICS = ("3d", "3e", "3f", "admin_task_share", "1g", "quality_grade", "relevance_llm")


@dataclass
class AbstractOutcome:
    table: MetricTable
    extraction: Extraction | None = None
    tasks: list[StudentTask] | None = None
    guides: dict[str, AssessmentGuide] = field(default_factory=dict)
    quality_grades: list[QualityGrade] = field(default_factory=list)
    hypothetical_docs: list[HypotheticalDoc] | None = None
    unavailable: list[str] = field(default_factory=list)
    failures: list[dict[str, Any]] = field(default_factory=list)

    def to_report_dict(self) -> dict[str, Any]:
        return {
            "extraction": self.extraction.to_dict() if self.extraction else None,
            "tasks": [
                {"id": t.id, "text": t.text, "category": t.category, "assignee": t.assignee}
                for t in self.tasks
            ]
            if self.tasks is not None
            else None,
            "guides": {k: g.to_dict() for k, g in sorted(self.guides.items())},
            "quality_grades": [g.to_dict() for g in self.quality_grades],
            "hypothetical_docs": [{"goal_id": d.goal_id, "text": d.text} for d in self.hypothetical_docs]
            if self.hypothetical_docs is not None
            else None,
            "unavailable_metrics": sorted(self.unavailable),
            "failures": self.failures,
        }


def compute_abstract(
    bundle: EvidenceBundle,
    provider: Provider | None,
    theta_match: float = 0.75,
    retries: int = 1,
) -> AbstractOutcome:
    outcome = AbstractOutcome(table=MetricTable(roster=bundle.roster_ids))

    guide_types = {"text"} if any(artifact_type(a) == "text" for a in bundle.text_artifacts) else set()
    if any(artifact_type(a) == "code" for a in bundle.text_artifacts):
        guide_types.add("code")
    if bundle.media_artifacts:
        guide_types.add("media")
    for kind in sorted(guide_types):
        outcome.guides[kind] = fetch_guide(kind, provider) if provider is not None else _default(kind)

    quality_table, grades = quality_columns(bundle, provider, outcome.guides, retries)
    outcome.table.merge(quality_table)
    outcome.quality_grades = grades
    if any(g.partial for g in grades):
        outcome.failures.append({"op": "rubric_grade", "error": "provider rubric unavailable; deterministic grade only"})

    if provider is None:
        outcome.unavailable = [m for m in ABSTRACT_METRICS if m not in ("1g", "quality_grade")]
        outcome.failures.append({"op": "*", "error": "no provider configured"})
        return outcome

    try:
        outcome.extraction = extract_structure(bundle, provider, retries)
        if outcome.extraction is None:
            outcome.failures.append({"op": "extract", "error": "extraction failed after retry"})
    except ProviderError as exc:
        outcome.extraction = None
        outcome.failures.append({"op": "extract", "error": str(exc)})

    record_categories: dict[str, str] | None
    try:
        record_categories = categorize_record_tasks(bundle.tasks, provider, retries)
        if record_categories is None:
            outcome.failures.append({"op": "categorize", "error": "categorisation failed after retry"})
    except ProviderError as exc:
        record_categories = None
        outcome.failures.append({"op": "categorize", "error": str(exc)})

    outcome.tasks = unified_tasks(bundle, outcome.extraction, record_categories)

    try:
        outcome.unavailable.extend(
            merge_fidelity_metrics(
                outcome.table, bundle, outcome.extraction, outcome.tasks, provider, theta_match
            )
        )
    except ProviderError as exc:
        outcome.failures.append({"op": "embed", "error": str(exc)})
        outcome.unavailable.extend(["3d", "3e", "3f", "admin_task_share"])

    try:
        outcome.hypothetical_docs = hypothetical_documents(outcome.extraction, provider, retries)
        relevance = relevance_column(bundle, outcome.hypothetical_docs, provider)
        if relevance is not None:
            outcome.table.set_column("relevance_llm", *relevance)
        else:
            outcome.unavailable.append("relevance_llm")
    except ProviderError as exc:
        outcome.failures.append({"op": "hypothetical", "error": str(exc)})
        outcome.unavailable.append("relevance_llm")

    outcome.unavailable = sorted(set(outcome.unavailable))
    return outcome


def _default(kind: str) -> AssessmentGuide:
    from .grading import default_guide

    return default_guide(kind)

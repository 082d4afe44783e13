"""Embedding-backed coordination metrics: task fidelity, assignment fidelity,
task diversity, and the admin-task share that feeds the Support benchmark.

Similarities live in the mapped [0, 1] cosine space ((cos + 1) / 2). Record-based
tasks take precedence over extracted ones whenever tasks.json is present: hard
records beat inferred structure.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..evidence.types import EvidenceBundle
from ..metrics.table import MetricTable
from ..provider import Provider
from ..stats import cosine, mapped_cosine, normalized_entropy
from .extraction import Extraction


@dataclass
class StudentTask:
    id: str
    text: str
    category: str
    assignee: str | None


def unified_tasks(
    bundle: EvidenceBundle,
    extraction: Extraction | None,
    record_categories: dict[str, str] | None,
) -> list[StudentTask] | None:
    """The task list the coordination metrics run on; None when nothing is usable."""
    if bundle.tasks:
        if record_categories is None:
            return None  # records exist but could not be categorised
        return [
            StudentTask(
                id=t.id,
                text=f"{t.title}. {t.description}".strip(". "),
                category=record_categories.get(t.id, "admin"),
                assignee=t.assignee,
            )
            for t in bundle.tasks
        ]
    if extraction is not None and extraction.tasks:
        return [
            StudentTask(id=t.id, text=t.statement, category=t.category, assignee=t.assignee)
            for t in extraction.tasks
        ]
    return None


def _centroid(vectors: list[list[float]]) -> list[float]:
    dim = len(vectors[0])
    return [sum(v[i] for v in vectors) / len(vectors) for i in range(dim)]


def task_fidelity_column(
    bundle: EvidenceBundle, extraction: Extraction | None, provider: Provider
) -> tuple[dict[str, float], dict[str, int]] | None:
    """Mean mapped similarity of attended-meeting outcomes to the goal centroid."""
    if extraction is None or not extraction.goals or not extraction.meeting_outcomes:
        return None
    goal_vecs = provider.embed([g.statement for g in extraction.goals])
    centroid = _centroid([v.values for v in goal_vecs])
    outcome_vecs = provider.embed([o.statement for o in extraction.meeting_outcomes])
    per_meeting = {
        o.meeting: mapped_cosine(cosine(vec.values, centroid))
        for o, vec in zip(extraction.meeting_outcomes, outcome_vecs)
    }

    meetings = sorted(bundle.meetings, key=lambda m: m.start)
    values: dict[str, float] = {}
    supports: dict[str, int] = {}
    for student in bundle.roster_ids:
        attended = [i for i, m in enumerate(meetings) if student in m.attendees and i in per_meeting]
        if attended:
            values[student] = sum(per_meeting[i] for i in attended) / len(attended)
            supports[student] = len(attended)
        else:
            values[student] = 0.0
            supports[student] = 0
    return values, supports


def assignment_fidelity_column(
    bundle: EvidenceBundle,
    tasks: list[StudentTask] | None,
    extraction: Extraction | None,
    provider: Provider,
    theta_match: float,
) -> tuple[dict[str, float], dict[str, int]] | None:
    """Fraction of a student's assigned tasks matched by one of their work summaries."""
    if tasks is None:
        return None
    assigned = [t for t in tasks if t.assignee is not None]
    if not assigned:
        return None
    summaries = extraction.work_summaries if extraction is not None else []

    texts = [t.text for t in assigned] + [w.statement for w in summaries]
    vectors = provider.embed(texts) if texts else []
    task_vecs = vectors[: len(assigned)]
    summary_vecs = vectors[len(assigned):]

    values: dict[str, float] = {}
    supports: dict[str, int] = {}
    for student in bundle.roster_ids:
        own_tasks = [(t, v) for t, v in zip(assigned, task_vecs) if t.assignee == student]
        if not own_tasks:
            values[student] = 0.0
            supports[student] = 0
            continue
        own_summaries = [v for w, v in zip(summaries, summary_vecs) if w.student == student]
        matched = 0
        for _, tvec in own_tasks:
            if any(mapped_cosine(cosine(tvec.values, svec.values)) >= theta_match for svec in own_summaries):
                matched += 1
        values[student] = matched / len(own_tasks)
        supports[student] = len(own_tasks)
    return values, supports


def diversity_columns(
    bundle: EvidenceBundle, tasks: list[StudentTask] | None
) -> tuple[tuple[dict[str, float], dict[str, int]], tuple[dict[str, float], dict[str, int]]] | None:
    """Task diversity (normalised category entropy) and admin-task share per student."""
    if tasks is None:
        return None
    diversity: dict[str, float] = {}
    div_support: dict[str, int] = {}
    admin_share: dict[str, float] = {}
    admin_support: dict[str, int] = {}
    team_admin_total = sum(1 for t in tasks if t.category == "admin" and t.assignee is not None)

    for student in bundle.roster_ids:
        own = [t for t in tasks if t.assignee == student]
        counts: dict[str, int] = {}
        for t in own:
            counts[t.category] = counts.get(t.category, 0) + 1
        diversity[student] = normalized_entropy(list(counts.values())) if own else 0.0
        div_support[student] = len(own)
        own_admin = counts.get("admin", 0)
        admin_share[student] = own_admin / team_admin_total if team_admin_total else 0.0
        admin_support[student] = own_admin
    return (diversity, div_support), (admin_share, admin_support)


def merge_fidelity_metrics(
    table: MetricTable,
    bundle: EvidenceBundle,
    extraction: Extraction | None,
    tasks: list[StudentTask] | None,
    provider: Provider,
    theta_match: float,
) -> list[str]:
    """Install 3d/3e/3f/admin_task_share columns; returns ids left unavailable."""
    unavailable: list[str] = []

    fidelity = task_fidelity_column(bundle, extraction, provider)
    if fidelity is not None:
        table.set_column("3d", *fidelity)
    else:
        unavailable.append("3d")

    assignment = assignment_fidelity_column(bundle, tasks, extraction, provider, theta_match)
    if assignment is not None:
        table.set_column("3e", *assignment)
    else:
        unavailable.append("3e")

    diversity = diversity_columns(bundle, tasks)
    if diversity is not None:
        (div, div_s), (share, share_s) = diversity
        table.set_column("3f", div, div_s)
        table.set_column("admin_task_share", share, share_s)
    else:
        unavailable.extend(["3f", "admin_task_share"])
    return unavailable

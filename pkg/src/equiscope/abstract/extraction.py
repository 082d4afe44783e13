"""Provider-backed structure extraction: goals, tasks, work summaries, meeting outcomes.

Every extraction carries a provenance pointer back into the bundle (meeting index or
commit sha). Invalid provider output is retried once, then recorded as an extraction
failure; the pipeline continues with the affected metrics marked unavailable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from ..errors import ProviderError
from ..evidence.types import EvidenceBundle, TaskRecord
from ..provider import Provider, build_request
from ..provider.mock import TASK_TAXONOMY

EXTRACT_SCHEMA = {
    "type": "object",
    "properties": {
        "goals": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"id": {"type": "string"}, "statement": {"type": "string"}},
                "required": ["id", "statement"],
            },
        },
        "tasks": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "statement": {"type": "string"},
                    "assignee": {"type": ["string", "null"]},
                    "source": {"type": "string"},
                    "category": {"type": "string"},
                },
                "required": ["id", "statement", "source", "category"],
            },
        },
        "work_summaries": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "student": {"type": "string"},
                    "statement": {"type": "string"},
                    "source": {"type": "string"},
                },
                "required": ["student", "statement", "source"],
            },
        },
        "meeting_outcomes": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"meeting": {"type": "integer"}, "statement": {"type": "string"}},
                "required": ["meeting", "statement"],
            },
        },
    },
    "required": ["goals", "tasks", "work_summaries", "meeting_outcomes"],
}

CATEGORIZE_SCHEMA = {
    "type": "object",
    "properties": {
        "categories": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"id": {"type": "string"}, "category": {"type": "string"}},
                "required": ["id", "category"],
            },
        }
    },
    "required": ["categories"],
}


@dataclass
class ExtractedGoal:
    id: str
    statement: str


@dataclass
class ExtractedTask:
    id: str
    statement: str
    source: str
    category: str
    assignee: str | None = None


@dataclass
class WorkSummary:
    student: str
    statement: str
    source: str


@dataclass
class MeetingOutcome:
    meeting: int
    statement: str


@dataclass
class Extraction:
    goals: list[ExtractedGoal] = field(default_factory=list)
    tasks: list[ExtractedTask] = field(default_factory=list)
    work_summaries: list[WorkSummary] = field(default_factory=list)
    meeting_outcomes: list[MeetingOutcome] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "goals": [{"id": g.id, "statement": g.statement} for g in self.goals],
            "tasks": [
                {"id": t.id, "statement": t.statement, "source": t.source,
                 "category": t.category, "assignee": t.assignee}
                for t in self.tasks
            ],
            "work_summaries": [
                {"student": w.student, "statement": w.statement, "source": w.source}
                for w in self.work_summaries
            ],
            "meeting_outcomes": [{"meeting": o.meeting, "statement": o.statement} for o in self.meeting_outcomes],
        }


def extraction_data(bundle: EvidenceBundle) -> dict[str, Any]:
    return {
        "task_description": bundle.task_description,
        "roster": bundle.roster_ids,
        "meetings": [
            {"id": i, "minutes": m.minutes_text, "attendees": m.attendees}
            for i, m in enumerate(sorted(bundle.meetings, key=lambda m: m.start))
        ],
        "commits": [
            {"student": c.student, "message": c.message, "sha": c.sha}
            for c in bundle.commits
            if c.student is not None
        ],
    }


def _call_validated(provider: Provider, request, schema: dict, retries: int) -> dict[str, Any] | None:
    for _ in range(retries + 1):
        try:
            payload = json.loads(provider.send(request).text)
            jsonschema.validate(payload, schema)
            return payload
        except (ProviderError, json.JSONDecodeError, jsonschema.ValidationError):
            continue
    return None


def extract_structure(bundle: EvidenceBundle, provider: Provider, retries: int = 1) -> Extraction | None:
    """Run the structure-extraction prompt; None means extraction failed after retry."""
    request = build_request(
        "extract",
        "You extract project structure from group-work evidence: goals, tasks, work summaries, meeting outcomes.",
        "Return JSON with keys goals, tasks, work_summaries, meeting_outcomes. "
        f"Task categories must come from {list(TASK_TAXONOMY)}.",
        extraction_data(bundle),
        max_tokens=4096,
    )
    payload = _call_validated(provider, request, EXTRACT_SCHEMA, retries)
    if payload is None:
        return None
    roster = set(bundle.roster_ids)
    return Extraction(
        goals=[ExtractedGoal(g["id"], g["statement"]) for g in payload["goals"]],
        tasks=[
            ExtractedTask(
                id=t["id"],
                statement=t["statement"],
                source=t["source"],
                category=_clamp_category(t["category"]),
                assignee=t.get("assignee") if t.get("assignee") in roster else None,
            )
            for t in payload["tasks"]
        ],
        work_summaries=[
            WorkSummary(w["student"], w["statement"], w["source"])
            for w in payload["work_summaries"]
            if w["student"] in roster
        ],
        meeting_outcomes=[MeetingOutcome(o["meeting"], o["statement"]) for o in payload["meeting_outcomes"]],
    )


def categorize_record_tasks(tasks: list[TaskRecord], provider: Provider, retries: int = 1) -> dict[str, str] | None:
    """Map task ids to taxonomy categories; None when the provider cannot answer."""
    if not tasks:
        return {}
    request = build_request(
        "categorize",
        "You classify project tasks into a fixed category taxonomy.",
        f"Assign each task one category from {list(TASK_TAXONOMY)}.",
        {"tasks": [{"id": t.id, "title": t.title, "description": t.description} for t in tasks]},
    )
    payload = _call_validated(provider, request, CATEGORIZE_SCHEMA, retries)
    if payload is None:
        return None
    return {c["id"]: _clamp_category(c["category"]) for c in payload["categories"]}


def _clamp_category(category: str) -> str:
    c = category.strip().lower()
    return c if c in TASK_TAXONOMY else "admin"

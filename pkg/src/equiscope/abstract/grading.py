"""Rubric-backed quality grading: assessment guides, deterministic graders, and the
combined quality score (mean of the provider's rubric mean and the deterministic
tool grade, both on the 1..5 scale).

When the provider is unavailable the deterministic component stands alone and the
result is flagged partial rather than failing the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from ..errors import ProviderError
from ..evidence.types import EvidenceBundle, MediaArtifact, MediaKind, TextArtifact
from ..filekinds import is_code_path
from ..metrics.readability import flesch_reading_ease
from ..metrics.table import MetricTable
from ..provider import Provider, build_request

EXCERPT_CHARS = 4000

RUBRIC_SCHEMA = {
    "type": "object",
    "properties": {
        "scores": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "criterion": {"type": "string"},
                    "score": {"type": "integer", "minimum": 1, "maximum": 5},
                    "justification": {"type": "string"},
                },
                "required": ["criterion", "score", "justification"],
                "additionalProperties": False,
            },
        }
    },
    "required": ["scores"],
    "additionalProperties": False,
}


@dataclass
class RubricItem:
    criterion: str
    levels: dict[int, str]

    def to_dict(self) -> dict[str, Any]:
        return {"criterion": self.criterion, "levels": {str(k): v for k, v in sorted(self.levels.items())}}


@dataclass
class AssessmentGuide:
    contribution_type: str
    rubric_items: list[RubricItem]
    worked_examples: list[str] = field(default_factory=list)

    @property
    def criteria(self) -> list[str]:
        return [item.criterion for item in self.rubric_items]

    def to_dict(self) -> dict[str, Any]:
        return {
            "contribution_type": self.contribution_type,
            "rubric_items": [i.to_dict() for i in self.rubric_items],
            "worked_examples": list(self.worked_examples),
        }


_LEVELS = {
    1: "well below expectations",
    2: "below expectations",
    3: "adequate",
    4: "strong",
    5: "exemplary",
}


def _items(*criteria: str) -> list[RubricItem]:
    return [RubricItem(c, dict(_LEVELS)) for c in criteria]


_DEFAULT_GUIDES = {
    "code": AssessmentGuide(
        "code",
        _items("correctness", "clarity", "documentation"),
        ["A small module with tests, consistent formatting and docstrings scores 4-5."],
    ),
    "text": AssessmentGuide(
        "text",
        _items("structure", "clarity", "depth"),
        ["A well-sectioned report with clear sentences and supported claims scores 4-5."],
    ),
    "media": AssessmentGuide(
        "media",
        _items("production_quality", "task_relevance", "effort"),
        ["An edited multi-minute recording that covers the task scores 4-5."],
    ),
}


def default_guide(contribution_type: str) -> AssessmentGuide:
    return _DEFAULT_GUIDES.get(contribution_type, _DEFAULT_GUIDES["text"])


def fetch_guide(contribution_type: str, provider: Provider) -> AssessmentGuide:
    """Ask the provider for a guide; fall back to the shipped default on any failure."""
    request = build_request(
        "guide",
        "You prepare concise assessment guides for grading student group-work artifacts.",
        f"Produce a rubric guide for {contribution_type} contributions with criteria and 1..5 level descriptors.",
        {"contribution_type": contribution_type},
    )
    try:
        payload = json.loads(provider.send(request).text)
        items = [
            RubricItem(str(i["criterion"]), {int(k): str(v) for k, v in i["levels"].items()})
            for i in payload["rubric_items"]
        ]
        if not items:
            raise ValueError("guide with no rubric items")
        return AssessmentGuide(contribution_type, items, [str(x) for x in payload.get("worked_examples", [])])
    except (ProviderError, ValueError, KeyError, TypeError, json.JSONDecodeError):
        return default_guide(contribution_type)


# -- deterministic tool graders (1..5 scale) --------------------------------

CODE_STYLE_RULES = (
    ("long-line", lambda line: len(line) > 120),
    ("trailing-whitespace", lambda line: line != line.rstrip() and line.strip() != ""),
    ("todo-marker", lambda line: any(m in line for m in ("TODO", "FIXME", "XXX"))),
    ("mixed-indent", lambda line: "\t" in _leading_ws(line) and " " in _leading_ws(line)),
)


def _leading_ws(line: str) -> str:
    return line[: len(line) - len(line.lstrip())]


def code_style_violations(body: str) -> list[tuple[int, str]]:
    found = []
    for lineno, line in enumerate(body.splitlines(), start=1):
        for name, rule in CODE_STYLE_RULES:
            if rule(line):
                found.append((lineno, name))
    return found


def grade_code(body: str) -> float:
    lines = max(1, len(body.splitlines()))
    rate = len(code_style_violations(body)) / lines
    return max(1.0, 5.0 - 10.0 * rate)


def grade_prose(body: str) -> float:
    ease = min(100.0, max(0.0, flesch_reading_ease(body)))
    return 1.0 + 4.0 * ease / 100.0


def grade_media(artifact: MediaArtifact) -> float:
    if artifact.size_bytes <= 0:
        return 1.0
    score = 3.0
    if artifact.kind in (MediaKind.AUDIO, MediaKind.VIDEO) and (artifact.duration_seconds or 0) >= 60:
        score += 1.0
    if artifact.kind is MediaKind.SLIDES and (artifact.page_count or 0) >= 5:
        score += 1.0
    return min(5.0, score)


def deterministic_grade(artifact: TextArtifact | MediaArtifact) -> float:
    if isinstance(artifact, MediaArtifact):
        return grade_media(artifact)
    if is_code_path(artifact.path):
        return grade_code(artifact.body)
    return grade_prose(artifact.body)


def artifact_type(artifact: TextArtifact | MediaArtifact) -> str:
    if isinstance(artifact, MediaArtifact):
        return "media"
    return "code" if is_code_path(artifact.path) else "text"


@dataclass
class QualityGrade:
    path: str
    contribution_type: str
    deterministic: float
    rubric_scores: list[dict[str, Any]] | None
    total: float
    partial: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "contribution_type": self.contribution_type,
            "deterministic": self.deterministic,
            "rubric_scores": self.rubric_scores,
            "total": self.total,
            "partial": self.partial,
        }


def grade_quality(
    artifact: TextArtifact | MediaArtifact,
    guide: AssessmentGuide,
    provider: Provider | None,
    retries: int = 1,
) -> QualityGrade:
    """Combined quality for one artifact: mean of rubric mean and deterministic grade."""
    det = deterministic_grade(artifact)
    kind = artifact_type(artifact)
    rubric_scores = None
    if provider is not None:
        excerpt = artifact.body[:EXCERPT_CHARS] if isinstance(artifact, TextArtifact) else ""
        request = build_request(
            "rubric_grade",
            "You grade one student artifact against the provided rubric, one integer score per criterion.",
            "Score every criterion from 1 to 5 with a one-sentence justification each.",
            {
                "artifact": {"path": artifact.path, "type": kind, "excerpt": excerpt},
                "criteria": guide.criteria,
                "guide": guide.to_dict(),
            },
        )
        for _ in range(retries + 1):
            try:
                payload = json.loads(provider.send(request).text)
                jsonschema.validate(payload, RUBRIC_SCHEMA)
                returned = {s["criterion"] for s in payload["scores"]}
                if returned != set(guide.criteria):
                    raise ValueError(f"rubric criteria mismatch: {sorted(returned)}")
                rubric_scores = payload["scores"]
                break
            except (ProviderError, ValueError, KeyError, json.JSONDecodeError, jsonschema.ValidationError):
                rubric_scores = None
    if rubric_scores is None:
        return QualityGrade(artifact.path, kind, det, None, det, partial=True)
    rubric_mean = sum(s["score"] for s in rubric_scores) / len(rubric_scores)
    return QualityGrade(artifact.path, kind, det, rubric_scores, (rubric_mean + det) / 2.0, partial=False)


def quality_columns(
    bundle: EvidenceBundle,
    provider: Provider | None,
    guides: dict[str, AssessmentGuide],
    retries: int = 1,
) -> tuple[MetricTable, list[QualityGrade]]:
    """Per-student code standard (1g) and overall rubric quality (quality_grade)."""
    table = MetricTable(roster=bundle.roster_ids)
    grades: list[QualityGrade] = []
    per_student_all: dict[str, list[float]] = {}
    per_student_code: dict[str, list[float]] = {}

    def credit(buckets: dict[str, list[float]], student: str, total: float) -> None:
        if student in table.roster:
            buckets.setdefault(student, []).append(total)

    for artifact in bundle.text_artifacts:
        kind = artifact_type(artifact)
        grade = grade_quality(artifact, guides.get(kind, default_guide(kind)), provider, retries)
        grades.append(grade)
        authors = [s.student for s in artifact.per_author_spans if s.word_count > 0 or s.char_count > 0]
        for author in authors:
            credit(per_student_all, author, grade.total)
            if kind == "code":
                credit(per_student_code, author, grade.total)
    for media in bundle.media_artifacts:
        grade = grade_quality(media, guides.get("media", default_guide("media")), provider, retries)
        grades.append(grade)
        credit(per_student_all, media.author, grade.total)

    table.set_column(
        "1g",
        {s: sum(v) / len(v) for s, v in per_student_code.items()},
        {s: len(v) for s, v in per_student_code.items()},
    )
    table.set_column(
        "quality_grade",
        {s: sum(v) / len(v) for s, v in per_student_all.items()},
        {s: len(v) for s, v in per_student_all.items()},
    )
    return table, grades

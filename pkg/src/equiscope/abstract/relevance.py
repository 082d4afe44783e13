"""Relevance via hypothetical deliverables: generate one expected document per goal,
then score each student's aggregated output by its best mapped similarity to any of
them. A student with no output scores 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import jsonschema

from ..errors import ProviderError
from ..evidence.types import EvidenceBundle
from ..provider import Provider, build_request
from ..stats import cosine, mapped_cosine
from .extraction import Extraction

HYPOTHETICAL_SCHEMA = {
    "type": "object",
    "properties": {
        "documents": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"goal_id": {"type": "string"}, "text": {"type": "string"}},
                "required": ["goal_id", "text"],
            },
        }
    },
    "required": ["documents"],
}


@dataclass
class HypotheticalDoc:
    goal_id: str
    text: str


def hypothetical_documents(extraction: Extraction | None, provider: Provider,
                           retries: int = 1) -> list[HypotheticalDoc] | None:
    if extraction is None or not extraction.goals:
        return None
    request = build_request(
        "hypothetical",
        "You write short hypothetical deliverables that would satisfy each project goal.",
        "Return JSON {documents: [{goal_id, text}]} with one document per goal.",
        {"goals": [{"id": g.id, "statement": g.statement} for g in extraction.goals]},
        max_tokens=4096,
    )
    for _ in range(retries + 1):
        try:
            payload = json.loads(provider.send(request).text)
            jsonschema.validate(payload, HYPOTHETICAL_SCHEMA)
            docs = [HypotheticalDoc(d["goal_id"], d["text"]) for d in payload["documents"]]
            if docs:
                return docs
        except (ProviderError, json.JSONDecodeError, jsonschema.ValidationError):
            continue
    return None


def student_output_text(bundle: EvidenceBundle, student: str) -> str:
    """Everything a student demonstrably produced: authored artifact bodies + commit messages."""
    parts: list[str] = []
    for artifact in bundle.text_artifacts:
        if any(s.student == student and (s.word_count > 0 or s.char_count > 0) for s in artifact.per_author_spans):
            parts.append(artifact.body)
    for commit in bundle.commits:
        if commit.student == student and commit.message:
            parts.append(commit.message)
    return "\n".join(parts)


def relevance_column(
    bundle: EvidenceBundle, docs: list[HypotheticalDoc] | None, provider: Provider
) -> tuple[dict[str, float], dict[str, int]] | None:
    """Best mapped similarity of each student's output to any hypothetical document."""
    if not docs:
        return None
    doc_vecs = provider.embed([d.text for d in docs])
    values: dict[str, float] = {}
    supports: dict[str, int] = {}
    outputs = {s: student_output_text(bundle, s) for s in bundle.roster_ids}
    non_empty = [s for s in bundle.roster_ids if outputs[s].strip()]
    out_vecs = dict(zip(non_empty, provider.embed([outputs[s] for s in non_empty]))) if non_empty else {}
    for student in bundle.roster_ids:
        vec = out_vecs.get(student)
        if vec is None:
            values[student] = 0.0
            supports[student] = 0
            continue
        values[student] = max(mapped_cosine(cosine(vec.values, d.values)) for d in doc_vecs)
        supports[student] = 1
    return values, supports

"""Local dimension summaries and the pre-validation global judgment.

Claims are structured (subject, predicate, datum_ref, value) triples rather than
free prose, so the validation pass can check them mechanically; the narrative the
instructor reads is rendered later from the claims that survive validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from ..conflict import ConflictMarker
from ..errors import ProviderError
from ..measures import DIMENSIONS, BaseMeasures, ObjectiveMeasures
from ..provider import Provider
from .prompts import build_global_prompt, build_local_prompt, salient_features

DISCLAIMER = (
    "Advisory analysis only: this report surfaces evidence patterns to support an instructor's "
    "own investigation. It contains no grades and must not be used for automated grading decisions."
)

LOCAL_SCHEMA = {
    "type": "object",
    "properties": {"narrative": {"type": "string", "minLength": 1}},
    "required": ["narrative"],
    "additionalProperties": False,
}

GLOBAL_SCHEMA = {
    "type": "object",
    "properties": {
        "claims": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "subject": {"type": "string"},
                    "predicate": {"type": "string"},
                    "datum_ref": {"type": "string"},
                    "value": {"type": ["number", "null"]},
                },
                "required": ["subject", "predicate", "datum_ref"],
                "additionalProperties": False,
            },
        },
        "suggested_investigation_steps": {"type": "array", "items": {"type": "string"}},
        "confidence": {"enum": ["low", "medium", "high"]},
    },
    "required": ["claims", "suggested_investigation_steps", "confidence"],
    "additionalProperties": False,
}


@dataclass
class Claim:
    subject: str
    predicate: str
    datum_ref: str
    value: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"subject": self.subject, "predicate": self.predicate,
                "datum_ref": self.datum_ref, "value": self.value}


@dataclass
class LocalSummary:
    dimension: str
    narrative: str
    salient_features: list[dict[str, Any]] = field(default_factory=list)
    citations: list[str] = field(default_factory=list)
    available: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension,
            "narrative": self.narrative,
            "salient_features": self.salient_features,
            "citations": sorted(self.citations),
            "available": self.available,
        }


@dataclass
class RawJudgment:
    claims: list[Claim]
    suggested_investigation_steps: list[str]
    confidence: str


def _send_validated(provider: Provider, request, schema: dict, retries: int) -> dict[str, Any] | None:
    for _ in range(retries + 1):
        try:
            payload = json.loads(provider.send(request).text)
            jsonschema.validate(payload, schema)
            return payload
        except (ProviderError, json.JSONDecodeError, jsonschema.ValidationError):
            continue
    return None


def local_summaries(
    base: BaseMeasures,
    markers: list[ConflictMarker],
    neutral_benchmarks: list[str],
    provider: Provider,
    retries: int = 1,
) -> dict[str, LocalSummary]:
    """One summary per dimension; a failed dimension gets an explicit unavailability stub."""
    summaries: dict[str, LocalSummary] = {}
    for dimension in DIMENSIONS:
        features = salient_features(dimension, base, markers)
        citations = [f"base:{f['id']}:{f['student']}" for f in features] + [
            f"marker:{m.benchmark}:{m.scenario}:{m.student}" for m in markers if m.dimension == dimension
        ]
        request = build_local_prompt(dimension, base, markers, neutral_benchmarks)
        payload = _send_validated(provider, request, LOCAL_SCHEMA, retries)
        if payload is None:
            summaries[dimension] = LocalSummary(
                dimension=dimension,
                narrative=f"Summary for {dimension} unavailable: the provider could not be reached.",
                salient_features=features,
                citations=citations,
                available=False,
            )
        else:
            summaries[dimension] = LocalSummary(
                dimension=dimension,
                narrative=payload["narrative"],
                salient_features=features,
                citations=citations,
            )
    return summaries


def global_judgment(
    summaries: dict[str, LocalSummary],
    objective: ObjectiveMeasures,
    markers: list[ConflictMarker],
    adjustments: dict[str, Any],
    pa_evidence: list[dict[str, Any]],
    provider: Provider,
    retries: int = 1,
) -> RawJudgment | None:
    """Schema-validated overall judgment; None when the provider cannot produce one."""
    request = build_global_prompt(
        {d: s.narrative for d, s in summaries.items()}, objective, markers, adjustments, pa_evidence
    )
    payload = _send_validated(provider, request, GLOBAL_SCHEMA, retries)
    if payload is None:
        return None
    return RawJudgment(
        claims=[
            Claim(c["subject"], c["predicate"], c["datum_ref"], c.get("value"))
            for c in payload["claims"]
        ],
        suggested_investigation_steps=list(payload["suggested_investigation_steps"]),
        confidence=payload["confidence"],
    )

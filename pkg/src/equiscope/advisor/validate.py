"""Double-pass judgment validation: mechanical referential checks, then a provider
cross-examination. The rule-based pass is authoritative (a provider verdict can only
remove claims, never resurrect a referential failure), and no judgment ships without
a completed validation pass: if the validator is unreachable the judgment is withheld
while the measures still deliver.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from ..conflict import ConflictMarker
from ..errors import ProviderError
from ..measures import BaseMeasures, ObjectiveMeasures
from ..metrics.table import MetricTable
from ..provider import Provider
from .judgment import DISCLAIMER, Claim, LocalSummary, RawJudgment
from .prompts import TEMPLATE_VERSION, build_validate_prompt

NUMERIC_TOLERANCE = 5e-3

VALIDATE_SCHEMA = {
    "type": "object",
    "properties": {
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "index": {"type": "integer", "minimum": 0},
                    "status": {"enum": ["supported", "rejected"]},
                    "reason": {"type": "string"},
                },
                "required": ["index", "status"],
                "additionalProperties": True,
            },
        }
    },
    "required": ["verdicts"],
    "additionalProperties": False,
}


@dataclass
class RunIndex:
    """Everything a claim may legally reference, keyed for O(1) checks."""

    roster: set[str]
    metrics: dict[tuple[str, str], float]          # (metric_id, student) -> value
    base: dict[tuple[str, str], float]             # (benchmark, student) -> value
    objective: dict[tuple[str, str], float]        # (dimension, student) -> value
    markers: dict[tuple[str, str, str], float]     # (benchmark, scenario, student) -> gini

    @classmethod
    def build(
        cls,
        roster: list[str],
        table: MetricTable,
        base: BaseMeasures,
        objective: ObjectiveMeasures,
        markers: list[ConflictMarker],
    ) -> "RunIndex":
        return cls(
            roster=set(roster),
            metrics={(m, s): table.value(m, s) for m in table.metric_ids() for s in table.roster},
            base={(b, s): v for s, bs in base.values.items() for b, v in bs.items()},
            objective={(d, s): v for s, ds in objective.values.items() for d, v in ds.items()},
            markers={(m.benchmark, m.scenario, m.student): m.gini for m in markers},
        )

    def lookup(self, datum_ref: str) -> tuple[float | None, str | None, str | None]:
        """Returns (value, student-in-ref, error). value None is legal for marker refs."""
        parts = datum_ref.split(":")
        if len(parts) == 4 and parts[0] == "marker":
            key = (parts[1], parts[2], parts[3])
            if key in self.markers:
                return self.markers[key], parts[3], None
            return None, parts[3], f"marker {datum_ref!r} did not fire in this run"
        if len(parts) == 3 and parts[0] in ("metric", "base", "objective"):
            table = {"metric": self.metrics, "base": self.base, "objective": self.objective}[parts[0]]
            key = (parts[1], parts[2])
            if key in table:
                return table[key], parts[2], None
            return None, parts[2], f"datum {datum_ref!r} not present in this run"
        return None, None, f"unparseable datum reference {datum_ref!r}"


def referential_check(claim: Claim, index: RunIndex) -> tuple[bool, str]:
    """True with the supporting datum, or False with the removal reason."""
    if claim.subject not in index.roster:
        return False, f"subject {claim.subject!r} is not on the roster"
    value, ref_student, error = index.lookup(claim.datum_ref)
    if error is not None:
        return False, error
    if ref_student is not None and ref_student != claim.subject:
        return False, f"datum {claim.datum_ref!r} concerns {ref_student!r}, not the claim subject"
    if claim.value is not None and value is not None and abs(claim.value - value) > NUMERIC_TOLERANCE:
        return False, f"claimed value {claim.value} does not match run value {value:.6f}"
    return True, claim.datum_ref


@dataclass
class AdvisoryJudgment:
    status: str  # ok | unavailable | withheld
    claims: list[Claim] = field(default_factory=list)
    per_student_narrative: dict[str, str] = field(default_factory=dict)
    flagged_conflicts: list[dict[str, Any]] = field(default_factory=list)
    suggested_investigation_steps: list[str] = field(default_factory=list)
    confidence: str = "low"
    validation_log: list[dict[str, Any]] = field(default_factory=list)
    disclaimer: str = DISCLAIMER
    template_version: str = TEMPLATE_VERSION
    reason: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "claims": [c.to_dict() for c in self.claims],
            "per_student_narrative": dict(sorted(self.per_student_narrative.items())),
            "flagged_conflicts": self.flagged_conflicts,
            "suggested_investigation_steps": self.suggested_investigation_steps,
            "confidence": self.confidence,
            "validation_log": self.validation_log,
            "disclaimer": self.disclaimer,
            "template_version": self.template_version,
            "reason": self.reason,
        }


def _digest(index: RunIndex) -> dict[str, Any]:
    return {
        "roster": sorted(index.roster),
        "markers": sorted(f"{b}:{sc}:{st}" for b, sc, st in index.markers),
        "objective": {f"{d}:{s}": v for (d, s), v in sorted(index.objective.items())},
    }


def _render_narratives(claims: list[Claim], markers: list[ConflictMarker], roster: list[str]) -> dict[str, str]:
    """Deterministic prose from surviving claims; never mentions grades."""
    by_marker = {(m.benchmark, m.scenario, m.student): m for m in markers}
    sentences: dict[str, list[str]] = {s: [] for s in roster}
    for claim in claims:
        parts = claim.datum_ref.split(":")
        if parts[0] == "marker":
            marker = by_marker.get((parts[1], parts[2], parts[3]))
            if marker is None:
                continue
            side = "above" if marker.scenario == "A" else "below"
            sentences[claim.subject].append(
                f"Sits well {side} the team average on {marker.benchmark} "
                f"(Gini {marker.gini:.2f}, deviation {marker.deviation_sd:+.2f} SD). "
                f"Possible reading: {marker.implication_text}"
            )
        elif parts[0] == "objective" and claim.value is not None:
            sentences[claim.subject].append(
                f"{parts[1]} index {claim.value:.2f} relative to a team mean of 1.0."
            )
    narratives: dict[str, str] = {}
    for student in roster:
        if sentences[student]:
            narratives[student] = " ".join(sentences[student])
        else:
            narratives[student] = "No inequality signals involve this student; evidence looks broadly even."
    return narratives


def validate_judgment(
    raw: RawJudgment | None,
    index: RunIndex,
    markers: list[ConflictMarker],
    roster: list[str],
    provider: Provider,
    retries: int = 1,
) -> AdvisoryJudgment:
    """Screen the raw judgment; fail closed if validation cannot complete."""
    if raw is None:
        return AdvisoryJudgment(status="unavailable", reason="no judgment produced by the provider")

    log: list[dict[str, Any]] = []
    survivors: list[Claim] = []
    for claim in raw.claims:
        ok, detail = referential_check(claim, index)
        if ok:
            survivors.append(claim)
        else:
            log.append({"claim": claim.to_dict(), "status": "removed", "reason": detail})

    request = build_validate_prompt([c.to_dict() for c in survivors], _digest(index))
    payload = None
    for _ in range(retries + 1):
        try:
            candidate = json.loads(provider.send(request).text)
            jsonschema.validate(candidate, VALIDATE_SCHEMA)
            payload = candidate
            break
        except ProviderError:
            payload = None
        except (json.JSONDecodeError, jsonschema.ValidationError):
            payload = None
    if payload is None:
        return AdvisoryJudgment(
            status="withheld",
            reason="validation pass could not complete; judgment withheld (fail closed)",
            validation_log=log,
        )

    rejected = {v["index"] for v in payload["verdicts"] if v["status"] == "rejected"}
    final: list[Claim] = []
    for i, claim in enumerate(survivors):
        if i in rejected:
            reason = next((v.get("reason", "") for v in payload["verdicts"] if v["index"] == i), "")
            log.append({"claim": claim.to_dict(), "status": "removed",
                        "reason": f"cross-examination rejection: {reason}"})
        else:
            final.append(claim)
            log.append({"claim": claim.to_dict(), "status": "supported", "supporting_datum": claim.datum_ref})

    if not markers:
        steps = list(raw.suggested_investigation_steps)
    else:
        steps = raw.suggested_investigation_steps
    return AdvisoryJudgment(
        status="ok",
        claims=final,
        per_student_narrative=_render_narratives(final, markers, roster),
        flagged_conflicts=[m.to_dict() for m in markers],
        suggested_investigation_steps=steps,
        confidence=raw.confidence,
        validation_log=log,
    )

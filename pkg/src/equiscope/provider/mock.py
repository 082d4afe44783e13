"""Deterministic offline provider: template responses plus seeded hash embeddings.

The mock reads the JSON data block embedded in each prompt and answers with a fixed
template over it, so the whole pipeline is testable without network access and the
same (seed, request) pair always produces identical bytes. Failure injection knobs
cover outage (``fail_ops``), malformed output (``malformed_ops``) and a fabricated
judgment claim (``adversarial``) for the fail-closed validation tests.
"""

from __future__ import annotations

import hashlib
import json
import re
import struct
from typing import Any, Sequence

from ..canonical import canonical_json
from ..errors import ProviderError
from . import EmbeddingVector, ProviderRequest, ProviderResponse

EMBED_DIM = 64

_GOAL_RE = re.compile(r"^\s*(?:[-*]\s*)?goal\s*:\s*(.+?)\s*$", re.IGNORECASE)
_TASK_RE = re.compile(
    r"^\s*(?:[-*]\s*)?task\s*:\s*(?P<title>.+?)\s*(?:=>\s*(?P<assignee>\S+))?\s*(?:\[(?P<category>\w+)\])?\s*$",
    re.IGNORECASE,
)
_DONE_RE = re.compile(r"^\s*(?:[-*]\s*)?done\s*:\s*(?P<student>[\w.-]+)\s*:\s*(?P<summary>.+?)\s*$", re.IGNORECASE)
_OUTCOME_RE = re.compile(r"^\s*(?:[-*]\s*)?outcome\s*:\s*(.+?)\s*$", re.IGNORECASE)

TASK_TAXONOMY = ("research", "writing", "coding", "design", "admin", "review")

_CATEGORY_KEYWORDS = {
    "research": ("research", "investigate", "survey", "study", "explore", "compare", "literature"),
    "writing": ("write", "draft", "document", "report", "essay", "intro", "conclusion", "summary"),
    "coding": ("implement", "code", "fix", "build", "develop", "refactor", "debug", "parser", "script"),
    "design": ("design", "mockup", "wireframe", "diagram", "layout", "slide", "poster", "figure"),
    "admin": ("schedule", "organise", "organize", "setup", "set up", "plan", "admin", "coordinate", "book", "agenda"),
    "review": ("review", "test", "check", "verify", "proofread", "validate", "qa"),
}


def categorize_task_text(text: str) -> str:
    """Keyword-first category guess with a stable hash fallback into the taxonomy."""
    lowered = text.lower()
    for category, keywords in _CATEGORY_KEYWORDS.items():
        if any(k in lowered for k in keywords):
            return category
    digest = hashlib.sha256(lowered.encode("utf-8")).digest()
    return TASK_TAXONOMY[digest[0] % len(TASK_TAXONOMY)]


class MockProvider:
    def __init__(
        self,
        seed: int = 0,
        adversarial: bool = False,
        fail_ops: Sequence[str] = (),
        malformed_ops: Sequence[str] = (),
    ):
        self.seed = seed
        self.adversarial = adversarial
        self.fail_ops = set(fail_ops)
        self.malformed_ops = set(malformed_ops)
        self.id = f"mock-{seed}"

    # -- transport ---------------------------------------------------------

    def send(self, request: ProviderRequest) -> ProviderResponse:
        if "*" in self.fail_ops or request.kind in self.fail_ops:
            raise ProviderError(f"mock outage for op {request.kind!r}")
        if "*" in self.malformed_ops or request.kind in self.malformed_ops:
            return self._respond("{this is not valid json", request)
        data = self._data(request)
        handler = getattr(self, f"_op_{request.kind}", None)
        if handler is None:
            raise ProviderError(f"mock has no template for op {request.kind!r}")
        return self._respond(canonical_json(handler(data)), request)

    def embed(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        if "*" in self.fail_ops or "embed" in self.fail_ops:
            raise ProviderError("mock outage for op 'embed'")
        return [EmbeddingVector(values=self._embed_one(t)) for t in texts]

    def _respond(self, text: str, request: ProviderRequest) -> ProviderResponse:
        prompt_len = sum(len(t) for _, t in request.segments)
        return ProviderResponse(
            text=text,
            provider_id=self.id,
            prompt_tokens=prompt_len // 4,
            completion_tokens=len(text) // 4,
            wall_time=0.0,
        )

    @staticmethod
    def _data(request: ProviderRequest) -> dict[str, Any]:
        block = request.data_block()
        if block is None:
            return {}
        return json.loads(block)

    # -- embeddings --------------------------------------------------------

    def _embed_one(self, text: str) -> list[float]:
        vector = [0.0] * EMBED_DIM
        for token in re.findall(r"[a-z0-9']+", text.lower()):
            digest = hashlib.shake_128(f"{self.seed}|{token}".encode("utf-8")).digest(EMBED_DIM * 4)
            for i in range(EMBED_DIM):
                (word,) = struct.unpack_from(">I", digest, i * 4)
                vector[i] += word / 0xFFFFFFFF * 2.0 - 1.0
        return vector

    # -- templated operations ----------------------------------------------

    def _op_extract(self, data: dict[str, Any]) -> dict[str, Any]:
        goals = []
        description = data.get("task_description", "")
        for line in description.splitlines():
            m = _GOAL_RE.match(line)
            if m:
                goals.append(m.group(1))
        if not goals and description.strip():
            sentences = [s.strip() for s in re.split(r"[.!?]+", description) if s.strip()]
            goals = sentences[:8]

        tasks: list[dict[str, Any]] = []
        summaries: list[dict[str, Any]] = []
        outcomes: list[dict[str, Any]] = []
        for meeting in data.get("meetings", []):
            meeting_id = meeting.get("id", 0)
            outcome_text = None
            for line in meeting.get("minutes", "").splitlines():
                tm = _TASK_RE.match(line)
                if tm and tm.group("title") and not line.lower().lstrip("-* ").startswith(("done", "outcome", "goal")):
                    title = tm.group("title")
                    tasks.append({
                        "id": f"xt{len(tasks) + 1}",
                        "statement": title,
                        "assignee": tm.group("assignee"),
                        "source": f"meeting:{meeting_id}",
                        "category": (tm.group("category") or categorize_task_text(title)).lower(),
                    })
                    continue
                dm = _DONE_RE.match(line)
                if dm:
                    summaries.append({
                        "student": dm.group("student"),
                        "statement": dm.group("summary"),
                        "source": f"meeting:{meeting_id}",
                    })
                    continue
                om = _OUTCOME_RE.match(line)
                if om:
                    outcome_text = om.group(1)
            if outcome_text is None:
                outcome_text = meeting.get("minutes", "").strip()
            if outcome_text:
                outcomes.append({"meeting": meeting_id, "statement": outcome_text})

        for commit in data.get("commits", []):
            if commit.get("student"):
                summaries.append({
                    "student": commit["student"],
                    "statement": commit.get("message", ""),
                    "source": f"commit:{commit.get('sha', '')}",
                })

        return {
            "goals": [{"id": f"g{i + 1}", "statement": s} for i, s in enumerate(goals)],
            "tasks": tasks,
            "work_summaries": summaries,
            "meeting_outcomes": outcomes,
        }

    def _op_categorize(self, data: dict[str, Any]) -> dict[str, Any]:
        return {
            "categories": [
                {"id": t["id"], "category": categorize_task_text(f"{t.get('title', '')} {t.get('description', '')}")}
                for t in data.get("tasks", [])
            ]
        }

    def _op_hypothetical(self, data: dict[str, Any]) -> dict[str, Any]:
        docs = []
        for goal in data.get("goals", []):
            statement = goal.get("statement", "")
            docs.append({
                "goal_id": goal.get("id", ""),
                "text": f"Expected deliverable: {statement} The team produces work that addresses this goal in full.",
            })
        return {"documents": docs}

    def _op_guide(self, data: dict[str, Any]) -> dict[str, Any]:
        from ..abstract.grading import default_guide

        return default_guide(data.get("contribution_type", "text")).to_dict()

    def _op_rubric_grade(self, data: dict[str, Any]) -> dict[str, Any]:
        return {
            "scores": [
                {"criterion": c, "score": 3, "justification": f"Meets the {c} criterion at an adequate level."}
                for c in data.get("criteria", [])
            ]
        }

    def _op_local_summary(self, data: dict[str, Any]) -> dict[str, Any]:
        dimension = data.get("dimension", "")
        markers = data.get("markers", [])
        feats = data.get("salient_features", [])
        if markers:
            bits = "; ".join(
                f"{m['student']} is an outlier on {m['benchmark']} (scenario {m['scenario']})" for m in markers
            )
            narrative = f"Within {dimension}, inequality signals fired: {bits}."
        else:
            narrative = f"Within {dimension}, no inequality signals fired; scores are broadly even."
        if feats:
            narrative += f" Salient readings: {len(feats)} value(s) deviate notably from the team mean."
        return {"narrative": narrative}

    def _op_global_judgment(self, data: dict[str, Any]) -> dict[str, Any]:
        claims = []
        for m in data.get("markers", []):
            claims.append({
                "subject": m["student"],
                "predicate": f"outlier_{m['benchmark']}_{m['scenario']}",
                "datum_ref": f"marker:{m['benchmark']}:{m['scenario']}:{m['student']}",
                "value": m.get("gini"),
            })
        for student, dims in sorted(data.get("objective", {}).items()):
            claims.append({
                "subject": student,
                "predicate": "objective_Contribution",
                "datum_ref": f"objective:Contribution:{student}",
                "value": dims.get("Contribution"),
            })
        if self.adversarial:
            claims.append({
                "subject": "nobody-x",
                "predicate": "outlier_Quantity_B",
                "datum_ref": "marker:Quantity:B:nobody-x",
                "value": 0.99,
            })
        n_markers = len(data.get("markers", []))
        confidence = "low" if n_markers == 0 else ("medium" if n_markers <= 2 else "high")
        steps = sorted({
            f"Review the underlying {m['benchmark']} evidence for {m['student']} before drawing conclusions."
            for m in data.get("markers", [])
        }) or ["No inequality signals fired; spot-check a sample of evidence to confirm the even spread."]
        return {"claims": claims, "suggested_investigation_steps": steps, "confidence": confidence}

    def _op_validate(self, data: dict[str, Any]) -> dict[str, Any]:
        return {
            "verdicts": [
                {"index": i, "status": "supported", "reason": "consistent with the supplied run data"}
                for i in range(len(data.get("claims", [])))
            ]
        }

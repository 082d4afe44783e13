"""Identity reconciliation: exact (alias, source-kind) lookup into the project roster.

Matching is deliberately exact (case-sensitive, no fuzzing): a wrong guess about who
wrote a commit is worse than an unresolved alias in a fairness-sensitive pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .types import SourceKind, StudentId


class _Unresolved:
    """Singleton lookup miss; a value, not an error."""

    def __repr__(self) -> str:  # pragma: no cover
        return "Unresolved"

    def __bool__(self) -> bool:
        return False


UNRESOLVED = _Unresolved()


@dataclass
class IdentityMap:
    """Maps (alias, source_kind) pairs to roster students, one student per pair."""

    entries: dict[tuple[str, SourceKind], StudentId] = field(default_factory=dict)

    def add(self, alias: str, kind: SourceKind, student: StudentId) -> None:
        key = (alias, kind)
        existing = self.entries.get(key)
        if existing is not None and existing != student:
            raise ValueError(f"alias {alias!r} ({kind.value}) already mapped to {existing.id}")
        self.entries[key] = student

    def to_dict(self) -> dict[str, Any]:
        return {
            "entries": [
                {"alias": a, "source_kind": k.value, "student": s.to_dict()}
                for (a, k), s in sorted(self.entries.items(), key=lambda kv: (kv[0][1].value, kv[0][0]))
            ]
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "IdentityMap":
        m = cls()
        for e in d.get("entries", []):
            m.add(str(e["alias"]), SourceKind(e["source_kind"]), StudentId.from_dict(e["student"]))
        return m


def resolve(alias: str, kind: SourceKind, identities: IdentityMap) -> StudentId | _Unresolved:
    """Exact (alias, source_kind) lookup; returns UNRESOLVED on a miss."""
    return identities.entries.get((alias, kind), UNRESOLVED)

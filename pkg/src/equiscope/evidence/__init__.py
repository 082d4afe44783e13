"""Evidence domain types, bundle loading, and identity reconciliation."""

from .gitlog import parse_git_numstat
from .identity import UNRESOLVED, IdentityMap, resolve
from .loader import LoadResult, bundle_fingerprint, load_bundle, load_identity_map
from .types import (
    AuthorSpan,
    ChatMessage,
    CommitRecord,
    ContextKind,
    ContextRecord,
    EmailRecord,
    EvidenceBundle,
    MediaArtifact,
    MediaKind,
    MeetingRecord,
    ParseIssue,
    PeerAssessmentItem,
    SourceKind,
    StudentId,
    TaskRecord,
    TaskStatus,
    TextArtifact,
)

__all__ = [
    "AuthorSpan",
    "ChatMessage",
    "CommitRecord",
    "ContextKind",
    "ContextRecord",
    "EmailRecord",
    "EvidenceBundle",
    "IdentityMap",
    "LoadResult",
    "MediaArtifact",
    "MediaKind",
    "MeetingRecord",
    "ParseIssue",
    "PeerAssessmentItem",
    "SourceKind",
    "StudentId",
    "TaskRecord",
    "TaskStatus",
    "TextArtifact",
    "UNRESOLVED",
    "bundle_fingerprint",
    "load_bundle",
    "load_identity_map",
    "parse_git_numstat",
    "resolve",
]

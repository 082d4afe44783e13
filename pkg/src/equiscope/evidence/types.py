"""Domain types for project evidence: submissions, conversations, coordination, PA, context.

All timestamps are normalised to UTC at parse time; the original zone offset is kept
per record for display. Records keep both the raw alias they were parsed with and the
resolved roster student id (``None`` when unresolved). Every type serialises to a
plain dict so a loaded bundle can round-trip through canonical JSON.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Any


class SourceKind(str, Enum):
    GIT_AUTHOR = "git-author"
    CHAT_HANDLE = "chat-handle"
    EMAIL_ADDRESS = "email-address"
    MEETING_NAME = "meeting-name"
    TASK_ASSIGNEE = "task-assignee"
    PA_NAME = "pa-name"


class MediaKind(str, Enum):
    IMAGE = "image"
    AUDIO = "audio"
    VIDEO = "video"
    SLIDES = "slides"
    OTHER = "other"


class TaskStatus(str, Enum):
    OPEN = "open"
    DONE = "done"
    ABANDONED = "abandoned"


class ContextKind(str, Enum):
    ABSENCE = "personal-circumstance-absence"
    PAST_GRADE = "past-grade"


def parse_instant(raw: str) -> tuple[datetime, int]:
    """Parse an ISO-8601 timestamp into (UTC datetime, original offset minutes)."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    offset = dt.utcoffset() or timedelta(0)
    return dt.astimezone(timezone.utc), int(offset.total_seconds() // 60)


def format_instant(dt_utc: datetime, offset_min: int) -> str:
    """Render a UTC instant back in its original zone offset."""
    zone = timezone(timedelta(minutes=offset_min))
    return dt_utc.astimezone(zone).isoformat()


@dataclass(frozen=True)
class StudentId:
    id: str
    display_name: str

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "display_name": self.display_name}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "StudentId":
        return cls(id=str(d["id"]), display_name=str(d.get("display_name", d["id"])))


@dataclass
class ParseIssue:
    """One malformed or suspicious input record; never causes silent data loss."""

    file: str
    line: int
    message: str

    def to_dict(self) -> dict[str, Any]:
        return {"file": self.file, "line": self.line, "message": self.message}


@dataclass
class CommitRecord:
    author_alias: str
    timestamp: datetime
    lines_added: int
    lines_deleted: int
    files: list[str]
    message: str
    sha: str = ""
    student: str | None = None
    offset_min: int = 0
    out_of_window: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "author_alias": self.author_alias,
            "ts": format_instant(self.timestamp, self.offset_min),
            "lines_added": self.lines_added,
            "lines_deleted": self.lines_deleted,
            "files": list(self.files),
            "message": self.message,
            "sha": self.sha,
            "student": self.student,
            "out_of_window": self.out_of_window,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CommitRecord":
        ts, off = parse_instant(d["ts"])
        return cls(
            author_alias=d["author_alias"],
            timestamp=ts,
            lines_added=int(d["lines_added"]),
            lines_deleted=int(d["lines_deleted"]),
            files=[str(f) for f in d.get("files", [])],
            message=d.get("message", ""),
            sha=d.get("sha", ""),
            student=d.get("student"),
            offset_min=off,
            out_of_window=bool(d.get("out_of_window", False)),
        )


@dataclass
class AuthorSpan:
    student: str
    word_count: int
    char_count: int

    def to_dict(self) -> dict[str, Any]:
        return {"student": self.student, "word_count": self.word_count, "char_count": self.char_count}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "AuthorSpan":
        return cls(str(d["student"]), int(d["word_count"]), int(d["char_count"]))


@dataclass
class TextArtifact:
    path: str
    per_author_spans: list[AuthorSpan]
    body: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "per_author_spans": [s.to_dict() for s in self.per_author_spans],
            "body": self.body,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TextArtifact":
        return cls(
            path=d["path"],
            per_author_spans=[AuthorSpan.from_dict(s) for s in d.get("per_author_spans", [])],
            body=d.get("body", ""),
        )


@dataclass
class MediaArtifact:
    path: str
    author: str
    kind: MediaKind
    size_bytes: int
    duration_seconds: float | None = None
    page_count: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "author": self.author,
            "kind": self.kind.value,
            "size_bytes": self.size_bytes,
            "duration_seconds": self.duration_seconds,
            "page_count": self.page_count,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MediaArtifact":
        dur = d.get("duration_seconds")
        return cls(
            path=d["path"],
            author=str(d["author"]),
            kind=MediaKind(d["kind"]),
            size_bytes=int(d.get("size_bytes", 0)),
            duration_seconds=float(dur) if dur is not None else None,
            page_count=int(d["page_count"]) if d.get("page_count") is not None else None,
        )


@dataclass
class ChatMessage:
    id: str
    sender_alias: str
    timestamp: datetime
    text: str
    channel: str
    reply_to: str | None = None
    mentions: list[str] = field(default_factory=list)
    sender: str | None = None
    mentions_resolved: list[str] = field(default_factory=list)
    offset_min: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "sender_alias": self.sender_alias,
            "ts": format_instant(self.timestamp, self.offset_min),
            "text": self.text,
            "channel": self.channel,
            "reply_to": self.reply_to,
            "mentions": list(self.mentions),
            "sender": self.sender,
            "mentions_resolved": list(self.mentions_resolved),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ChatMessage":
        ts, off = parse_instant(d["ts"])
        return cls(
            id=str(d["id"]),
            sender_alias=d["sender_alias"],
            timestamp=ts,
            text=d.get("text", ""),
            channel=d.get("channel", ""),
            reply_to=d.get("reply_to"),
            mentions=[str(m) for m in d.get("mentions", [])],
            sender=d.get("sender"),
            mentions_resolved=[str(m) for m in d.get("mentions_resolved", [])],
            offset_min=off,
        )


@dataclass
class EmailRecord:
    sender_alias: str
    recipient_aliases: list[str]
    timestamp: datetime
    subject: str
    body: str
    sender: str | None = None
    recipients: list[str] = field(default_factory=list)
    offset_min: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "sender_alias": self.sender_alias,
            "recipient_aliases": list(self.recipient_aliases),
            "ts": format_instant(self.timestamp, self.offset_min),
            "subject": self.subject,
            "body": self.body,
            "sender": self.sender,
            "recipients": list(self.recipients),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EmailRecord":
        ts, off = parse_instant(d["ts"])
        return cls(
            sender_alias=d["sender_alias"],
            recipient_aliases=[str(r) for r in d.get("recipient_aliases", [])],
            timestamp=ts,
            subject=d.get("subject", ""),
            body=d.get("body", ""),
            sender=d.get("sender"),
            recipients=[str(r) for r in d.get("recipients", [])],
            offset_min=off,
        )


@dataclass
class MeetingRecord:
    start: datetime
    duration_minutes: float
    attendee_aliases: list[str]
    minutes_text: str
    attendees: list[str] = field(default_factory=list)
    offset_min: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "start": format_instant(self.start, self.offset_min),
            "duration_minutes": self.duration_minutes,
            "attendee_aliases": list(self.attendee_aliases),
            "minutes_text": self.minutes_text,
            "attendees": list(self.attendees),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MeetingRecord":
        ts, off = parse_instant(d["start"])
        return cls(
            start=ts,
            duration_minutes=float(d["duration_minutes"]),
            attendee_aliases=[str(a) for a in d.get("attendee_aliases", [])],
            minutes_text=d.get("minutes_text", ""),
            attendees=[str(a) for a in d.get("attendees", [])],
            offset_min=off,
        )


@dataclass
class TaskRecord:
    id: str
    title: str
    description: str
    assignee_alias: str
    created: datetime
    status: TaskStatus
    due: datetime | None = None
    completed_at: datetime | None = None
    assignee: str | None = None
    offset_min: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "description": self.description,
            "assignee_alias": self.assignee_alias,
            "created": format_instant(self.created, self.offset_min),
            "due": format_instant(self.due, self.offset_min) if self.due else None,
            "completed_at": format_instant(self.completed_at, self.offset_min) if self.completed_at else None,
            "status": self.status.value,
            "assignee": self.assignee,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TaskRecord":
        created, off = parse_instant(d["created"])
        due = parse_instant(d["due"])[0] if d.get("due") else None
        done = parse_instant(d["completed_at"])[0] if d.get("completed_at") else None
        return cls(
            id=str(d["id"]),
            title=d.get("title", ""),
            description=d.get("description", ""),
            assignee_alias=d.get("assignee_alias", ""),
            created=created,
            due=due,
            completed_at=done,
            status=TaskStatus(d.get("status", "open")),
            assignee=d.get("assignee"),
            offset_min=off,
        )


@dataclass
class PeerAssessmentItem:
    rater_alias: str
    ratee_alias: str
    category_label: str
    score: int
    comment: str = ""
    rater: str | None = None
    ratee: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "rater_alias": self.rater_alias,
            "ratee_alias": self.ratee_alias,
            "category_label": self.category_label,
            "score": self.score,
            "comment": self.comment,
            "rater": self.rater,
            "ratee": self.ratee,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "PeerAssessmentItem":
        return cls(
            rater_alias=d["rater_alias"],
            ratee_alias=d["ratee_alias"],
            category_label=d.get("category_label", ""),
            score=int(d["score"]),
            comment=d.get("comment", ""),
            rater=d.get("rater"),
            ratee=d.get("ratee"),
        )


@dataclass
class ContextRecord:
    student: str
    kind: ContextKind
    note: str = ""
    interval: tuple[datetime, datetime] | None = None
    value: float | None = None
    offset_min: int = 0

    def to_dict(self) -> dict[str, Any]:
        iv = None
        if self.interval:
            iv = {
                "start": format_instant(self.interval[0], self.offset_min),
                "end": format_instant(self.interval[1], self.offset_min),
            }
        return {
            "student": self.student,
            "kind": self.kind.value,
            "note": self.note,
            "interval": iv,
            "value": self.value,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ContextRecord":
        interval = None
        off = 0
        if d.get("interval"):
            start, off = parse_instant(d["interval"]["start"])
            end, _ = parse_instant(d["interval"]["end"])
            interval = (start, end)
        return cls(
            student=str(d["student"]),
            kind=ContextKind(d["kind"]),
            note=d.get("note", ""),
            interval=interval,
            value=float(d["value"]) if d.get("value") is not None else None,
            offset_min=off,
        )


@dataclass
class EvidenceBundle:
    """The complete, identity-resolved evidence set for one team project."""

    project_id: str
    window_start: datetime
    window_end: datetime
    team_grade: float
    roster: list[StudentId]
    task_description: str = ""
    commits: list[CommitRecord] = field(default_factory=list)
    text_artifacts: list[TextArtifact] = field(default_factory=list)
    media_artifacts: list[MediaArtifact] = field(default_factory=list)
    chat_messages: list[ChatMessage] = field(default_factory=list)
    emails: list[EmailRecord] = field(default_factory=list)
    meetings: list[MeetingRecord] = field(default_factory=list)
    tasks: list[TaskRecord] = field(default_factory=list)
    pa_items: list[PeerAssessmentItem] = field(default_factory=list)
    context_records: list[ContextRecord] = field(default_factory=list)
    unresolved_aliases: list[tuple[str, str]] = field(default_factory=list)
    window_offset_min: int = 0

    @property
    def roster_ids(self) -> list[str]:
        return [s.id for s in self.roster]

    @property
    def window_hours(self) -> float:
        return (self.window_end - self.window_start).total_seconds() / 3600.0

    def timeline_position(self, ts: datetime) -> float:
        """Map an instant onto the [0, 1] project timeline, clamping out-of-window events."""
        span = (self.window_end - self.window_start).total_seconds()
        if span <= 0:
            return 0.0
        pos = (ts - self.window_start).total_seconds() / span
        return min(1.0, max(0.0, pos))

    def to_dict(self) -> dict[str, Any]:
        return {
            "project_id": self.project_id,
            "project_window": {
                "start": format_instant(self.window_start, self.window_offset_min),
                "end": format_instant(self.window_end, self.window_offset_min),
            },
            "team_grade": self.team_grade,
            "roster": [s.to_dict() for s in self.roster],
            "task_description": self.task_description,
            "commits": [c.to_dict() for c in self.commits],
            "text_artifacts": [t.to_dict() for t in self.text_artifacts],
            "media_artifacts": [m.to_dict() for m in self.media_artifacts],
            "chat_messages": [m.to_dict() for m in self.chat_messages],
            "emails": [e.to_dict() for e in self.emails],
            "meetings": [m.to_dict() for m in self.meetings],
            "tasks": [t.to_dict() for t in self.tasks],
            "pa_items": [p.to_dict() for p in self.pa_items],
            "context_records": [c.to_dict() for c in self.context_records],
            "unresolved_aliases": [[a, k] for a, k in self.unresolved_aliases],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EvidenceBundle":
        start, off = parse_instant(d["project_window"]["start"])
        end, _ = parse_instant(d["project_window"]["end"])
        return cls(
            project_id=str(d["project_id"]),
            window_start=start,
            window_end=end,
            team_grade=float(d["team_grade"]),
            roster=[StudentId.from_dict(s) for s in d["roster"]],
            task_description=d.get("task_description", ""),
            commits=[CommitRecord.from_dict(c) for c in d.get("commits", [])],
            text_artifacts=[TextArtifact.from_dict(t) for t in d.get("text_artifacts", [])],
            media_artifacts=[MediaArtifact.from_dict(m) for m in d.get("media_artifacts", [])],
            chat_messages=[ChatMessage.from_dict(m) for m in d.get("chat_messages", [])],
            emails=[EmailRecord.from_dict(e) for e in d.get("emails", [])],
            meetings=[MeetingRecord.from_dict(m) for m in d.get("meetings", [])],
            tasks=[TaskRecord.from_dict(t) for t in d.get("tasks", [])],
            pa_items=[PeerAssessmentItem.from_dict(p) for p in d.get("pa_items", [])],
            context_records=[ContextRecord.from_dict(c) for c in d.get("context_records", [])],
            unresolved_aliases=[(a, k) for a, k in d.get("unresolved_aliases", [])],
            window_offset_min=off,
        )

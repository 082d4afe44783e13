"""Evidence bundle loading and validation.

Directory layout (all paths relative to the bundle root):

    manifest.json    project_id, window {start, end}, team_grade, roster, task_description path
    identities.json  alias -> student entries, keyed by (alias, source_kind)
    commits.log      git log --numstat stream (see gitlog module)
    chat/*.jsonl     one chat message per line: id, sender, ts, text, reply_to, mentions, channel
    email/*.jsonl    one email per line: sender, recipients, ts, subject, body
    meetings.json    array of {start, duration_minutes, attendees, minutes}
    tasks.json       array of {id, title, description, assignee, created, due, completed_at, status}
    pa.csv           header rater,ratee,category,score,comment
    context.json     array of {student, kind, start, end, value, note}
    text/, media/    artifact files, each with an `<name>.attrib.json` attribution sidecar

Loading never drops a record silently: anything malformed becomes a ParseIssue with
file and line, anything unresolvable is flagged on the bundle. Missing manifest or a
roster smaller than two students is fatal.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..errors import BundleError
from .gitlog import parse_git_numstat
from .identity import UNRESOLVED, IdentityMap, resolve
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
    parse_instant,
)

TEXT_DIR = "text"
MEDIA_DIR = "media"
SIDECAR_SUFFIX = ".attrib.json"


@dataclass
class LoadResult:
    """A loaded bundle plus everything the validation report needs."""

    bundle: EvidenceBundle
    issues: list[ParseIssue] = field(default_factory=list)
    file_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    out_of_window: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.issues

    def summary(self) -> dict[str, Any]:
        b = self.bundle
        return {
            "project_id": b.project_id,
            "roster": [s.id for s in b.roster],
            "counts": {
                "commits": len(b.commits),
                "text_artifacts": len(b.text_artifacts),
                "media_artifacts": len(b.media_artifacts),
                "chat_messages": len(b.chat_messages),
                "emails": len(b.emails),
                "meetings": len(b.meetings),
                "tasks": len(b.tasks),
                "pa_items": len(b.pa_items),
                "context_records": len(b.context_records),
            },
            "unresolved_aliases": [[a, k] for a, k in b.unresolved_aliases],
            "parse_errors": [i.to_dict() for i in self.issues],
            "file_counts": self.file_counts,
            "out_of_window": self.out_of_window,
        }


class _Ctx:
    """Shared per-load state: identities, roster set, issue and alias accumulators."""

    def __init__(self, identities: IdentityMap, roster: list[StudentId]):
        self.identities = identities
        self.roster_ids = {s.id for s in roster}
        self.issues: list[ParseIssue] = []
        self.unresolved: set[tuple[str, str]] = set()
        self.file_counts: dict[str, dict[str, int]] = {}

    def resolve(self, alias: str, kind: SourceKind) -> str | None:
        student = resolve(alias, kind, self.identities)
        if student is UNRESOLVED:
            self.unresolved.add((alias, kind.value))
            return None
        assert isinstance(student, StudentId)
        if student.id not in self.roster_ids:
            self.unresolved.add((alias, kind.value))
            return None
        return student.id

    def count(self, fname: str, parsed: int, errors: int) -> None:
        self.file_counts[fname] = {"parsed": parsed, "errors": errors}


def load_identity_map(path: Path) -> IdentityMap:
    with open(path, encoding="utf-8") as fh:
        return IdentityMap.from_dict(json.load(fh))


def load_bundle(root: Path | str, identities: IdentityMap | None = None) -> LoadResult:
    """Load and validate a bundle directory. Raises BundleError on fatal problems."""
    root = Path(root)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise BundleError(f"missing manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleError(f"unreadable manifest: {exc}") from exc

    roster = _parse_roster(manifest)
    if len(roster) < 2:
        raise BundleError(f"roster must have at least 2 students, got {len(roster)}")

    try:
        window = manifest["window"]
        start, offset = parse_instant(window["start"])
        end, _ = parse_instant(window["end"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"manifest window invalid: {exc}") from exc
    if start >= end:
        raise BundleError("project window start must precede end")

    team_grade = float(manifest.get("team_grade", 0.0))
    if not 0.0 <= team_grade <= 100.0:
        raise BundleError(f"team_grade out of range 0..100: {team_grade}")

    if identities is None:
        ident_path = root / "identities.json"
        identities = load_identity_map(ident_path) if ident_path.is_file() else IdentityMap()

    ctx = _Ctx(identities, roster)
    bundle = EvidenceBundle(
        project_id=str(manifest["project_id"]),
        window_start=start,
        window_end=end,
        team_grade=team_grade,
        roster=roster,
        window_offset_min=offset,
    )

    desc_rel = manifest.get("task_description", "")
    if desc_rel:
        desc_path = root / desc_rel
        if desc_path.is_file():
            bundle.task_description = desc_path.read_text(encoding="utf-8")
        else:
            ctx.issues.append(ParseIssue("manifest.json", 0, f"task_description file not found: {desc_rel}"))

    out_of_window: dict[str, int] = {}
    _load_commits(root, ctx, bundle, out_of_window)
    _load_jsonl_dir(root / "chat", ctx, bundle, _parse_chat_line)
    _load_jsonl_dir(root / "email", ctx, bundle, _parse_email_line)
    _load_meetings(root, ctx, bundle, out_of_window)
    _load_tasks(root, ctx, bundle, out_of_window)
    _load_pa(root, ctx, bundle)
    _load_context(root, ctx, bundle)
    _load_text_artifacts(root, ctx, bundle)
    _load_media_artifacts(root, ctx, bundle)
    _check_reply_targets(ctx, bundle)

    bundle.unresolved_aliases = sorted(ctx.unresolved)
    return LoadResult(
        bundle=bundle,
        issues=ctx.issues,
        file_counts=ctx.file_counts,
        out_of_window={k: v for k, v in sorted(out_of_window.items()) if v},
    )


def bundle_fingerprint(root: Path | str) -> str:
    """Content hash of a bundle directory: sha256 over sorted (relative path, bytes)."""
    root = Path(root)
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        digest.update(str(path.relative_to(root)).encode("utf-8"))
        digest.update(b"\x00")
        digest.update(path.read_bytes())
        digest.update(b"\x01")
    return digest.hexdigest()


def _parse_roster(manifest: dict[str, Any]) -> list[StudentId]:
    roster = []
    for entry in manifest.get("roster", []):
        if isinstance(entry, str):
            roster.append(StudentId(entry, entry))
        else:
            roster.append(StudentId.from_dict(entry))
    ids = [s.id for s in roster]
    if len(set(ids)) != len(ids):
        raise BundleError(f"duplicate roster ids: {ids}")
    if any(not s.id for s in roster):
        raise BundleError("empty student id in roster")
    return roster


def _in_window(bundle: EvidenceBundle, ts) -> bool:
    return bundle.window_start <= ts <= bundle.window_end


def _load_commits(root: Path, ctx: _Ctx, bundle: EvidenceBundle, oow: dict[str, int]) -> None:
    path = root / "commits.log"
    if not path.is_file():
        return
    commits, issues = parse_git_numstat(path.read_text(encoding="utf-8"), "commits.log")
    ctx.issues.extend(issues)
    header_errors = sum(1 for i in issues if "header" in i.message or "date" in i.message)
    ctx.count("commits.log", len(commits), header_errors)
    for c in commits:
        c.student = ctx.resolve(c.author_alias, SourceKind.GIT_AUTHOR)
        c.out_of_window = not _in_window(bundle, c.timestamp)
        if c.out_of_window:
            oow["commits"] = oow.get("commits", 0) + 1
    bundle.commits = commits


def _load_jsonl_dir(directory: Path, ctx: _Ctx, bundle: EvidenceBundle, line_parser) -> None:
    if not directory.is_dir():
        return
    for path in sorted(directory.glob("*.jsonl")):
        fname = f"{directory.name}/{path.name}"
        parsed = errors = 0
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                line_parser(obj, ctx, bundle)
                parsed += 1
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                errors += 1
                ctx.issues.append(ParseIssue(fname, lineno, f"malformed record: {exc}"))
        ctx.count(fname, parsed, errors)


def _parse_chat_line(obj: dict[str, Any], ctx: _Ctx, bundle: EvidenceBundle) -> None:
    ts, offset = parse_instant(obj["ts"])
    msg = ChatMessage(
        id=str(obj["id"]),
        sender_alias=str(obj["sender"]),
        timestamp=ts,
        text=str(obj.get("text", "")),
        channel=str(obj.get("channel", "")),
        reply_to=obj.get("reply_to"),
        mentions=[str(m) for m in obj.get("mentions", [])],
        offset_min=offset,
    )
    msg.sender = ctx.resolve(msg.sender_alias, SourceKind.CHAT_HANDLE)
    msg.mentions_resolved = [
        r for r in (ctx.resolve(m, SourceKind.CHAT_HANDLE) for m in msg.mentions) if r is not None
    ]
    bundle.chat_messages.append(msg)


def _parse_email_line(obj: dict[str, Any], ctx: _Ctx, bundle: EvidenceBundle) -> None:
    recipients = [str(r) for r in obj["recipients"]]
    if not recipients:
        raise ValueError("email with no recipients")
    ts, offset = parse_instant(obj["ts"])
    rec = EmailRecord(
        sender_alias=str(obj["sender"]),
        recipient_aliases=recipients,
        timestamp=ts,
        subject=str(obj.get("subject", "")),
        body=str(obj.get("body", "")),
        offset_min=offset,
    )
    rec.sender = ctx.resolve(rec.sender_alias, SourceKind.EMAIL_ADDRESS)
    rec.recipients = [
        r for r in (ctx.resolve(a, SourceKind.EMAIL_ADDRESS) for a in recipients) if r is not None
    ]
    bundle.emails.append(rec)


def _load_meetings(root: Path, ctx: _Ctx, bundle: EvidenceBundle, oow: dict[str, int]) -> None:
    path = root / "meetings.json"
    if not path.is_file():
        return
    parsed = errors = 0
    try:
        records = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        ctx.issues.append(ParseIssue("meetings.json", exc.lineno, f"unreadable file: {exc}"))
        ctx.count("meetings.json", 0, 1)
        return
    for idx, obj in enumerate(records):
        try:
            start, offset = parse_instant(obj["start"])
            duration = float(obj["duration_minutes"])
            if duration <= 0:
                raise ValueError(f"duration_minutes must be positive, got {duration}")
            meeting = MeetingRecord(
                start=start,
                duration_minutes=duration,
                attendee_aliases=[str(a) for a in obj.get("attendees", [])],
                minutes_text=str(obj.get("minutes", "")),
                offset_min=offset,
            )
            meeting.attendees = [
                r
                for r in (ctx.resolve(a, SourceKind.MEETING_NAME) for a in meeting.attendee_aliases)
                if r is not None
            ]
            if not _in_window(bundle, start):
                oow["meetings"] = oow.get("meetings", 0) + 1
            bundle.meetings.append(meeting)
            parsed += 1
        except (KeyError, TypeError, ValueError) as exc:
            errors += 1
            ctx.issues.append(ParseIssue("meetings.json", idx + 1, f"malformed meeting: {exc}"))
    ctx.count("meetings.json", parsed, errors)


def _load_tasks(root: Path, ctx: _Ctx, bundle: EvidenceBundle, oow: dict[str, int]) -> None:
    path = root / "tasks.json"
    if not path.is_file():
        return
    parsed = errors = 0
    try:
        records = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        ctx.issues.append(ParseIssue("tasks.json", exc.lineno, f"unreadable file: {exc}"))
        ctx.count("tasks.json", 0, 1)
        return
    for idx, obj in enumerate(records):
        try:
            created, offset = parse_instant(obj["created"])
            status = TaskStatus(obj.get("status", "open"))
            due = parse_instant(obj["due"])[0] if obj.get("due") else None
            completed = parse_instant(obj["completed_at"])[0] if obj.get("completed_at") else None
            if (status is TaskStatus.DONE) != (completed is not None):
                raise ValueError("completed_at must be present exactly when status is done")
            if completed is not None and completed < created:
                raise ValueError("completed_at precedes created")
            task = TaskRecord(
                id=str(obj["id"]),
                title=str(obj.get("title", "")),
                description=str(obj.get("description", "")),
                assignee_alias=str(obj.get("assignee", "")),
                created=created,
                due=due,
                completed_at=completed,
                status=status,
                offset_min=offset,
            )
            if task.assignee_alias:
                task.assignee = ctx.resolve(task.assignee_alias, SourceKind.TASK_ASSIGNEE)
            if not _in_window(bundle, created):
                oow["tasks"] = oow.get("tasks", 0) + 1
            bundle.tasks.append(task)
            parsed += 1
        except (KeyError, TypeError, ValueError) as exc:
            errors += 1
            ctx.issues.append(ParseIssue("tasks.json", idx + 1, f"malformed task: {exc}"))
    ctx.count("tasks.json", parsed, errors)


def _load_pa(root: Path, ctx: _Ctx, bundle: EvidenceBundle, allow_self: bool = False) -> None:
    path = root / "pa.csv"
    if not path.is_file():
        return
    parsed = errors = 0
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = {"rater", "ratee", "category", "score"}
        if not reader.fieldnames or not expected.issubset(set(reader.fieldnames)):
            ctx.issues.append(ParseIssue("pa.csv", 1, f"header must contain {sorted(expected)}"))
            ctx.count("pa.csv", 0, 1)
            return
        for lineno, row in enumerate(reader, start=2):
            try:
                score = int(row["score"])
                if not 1 <= score <= 5:
                    raise ValueError(f"score out of 1..5 scale: {score}")
                item = PeerAssessmentItem(
                    rater_alias=row["rater"].strip(),
                    ratee_alias=row["ratee"].strip(),
                    category_label=row["category"].strip(),
                    score=score,
                    comment=(row.get("comment") or "").strip(),
                )
                item.rater = ctx.resolve(item.rater_alias, SourceKind.PA_NAME)
                item.ratee = ctx.resolve(item.ratee_alias, SourceKind.PA_NAME)
                if not allow_self and item.rater is not None and item.rater == item.ratee:
                    raise ValueError(f"self-assessment not enabled: {item.rater_alias!r}")
                bundle.pa_items.append(item)
                parsed += 1
            except (KeyError, TypeError, ValueError) as exc:
                errors += 1
                ctx.issues.append(ParseIssue("pa.csv", lineno, f"malformed row: {exc}"))
    ctx.count("pa.csv", parsed, errors)


def _load_context(root: Path, ctx: _Ctx, bundle: EvidenceBundle) -> None:
    path = root / "context.json"
    if not path.is_file():
        return
    parsed = errors = 0
    try:
        records = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        ctx.issues.append(ParseIssue("context.json", exc.lineno, f"unreadable file: {exc}"))
        ctx.count("context.json", 0, 1)
        return
    for idx, obj in enumerate(records):
        try:
            kind = ContextKind(obj["kind"])
            student = str(obj["student"])
            if student not in ctx.roster_ids:
                raise ValueError(f"unknown student id: {student!r}")
            interval = None
            offset = 0
            if kind is ContextKind.ABSENCE:
                if not obj.get("start") or not obj.get("end"):
                    raise ValueError("absence record requires start and end")
                start, offset = parse_instant(obj["start"])
                end, _ = parse_instant(obj["end"])
                if end < start:
                    raise ValueError("absence interval end precedes start")
                interval = (start, end)
            value = obj.get("value")
            if kind is ContextKind.PAST_GRADE:
                if value is None:
                    raise ValueError("past-grade record requires value")
                value = float(value)
                if not 0.0 <= value <= 100.0:
                    raise ValueError(f"past grade out of 0..100: {value}")
            bundle.context_records.append(
                ContextRecord(
                    student=student,
                    kind=kind,
                    note=str(obj.get("note", "")),
                    interval=interval,
                    value=float(value) if value is not None else None,
                    offset_min=offset,
                )
            )
            parsed += 1
        except (KeyError, TypeError, ValueError) as exc:
            errors += 1
            ctx.issues.append(ParseIssue("context.json", idx + 1, f"malformed context record: {exc}"))
    ctx.count("context.json", parsed, errors)


def _iter_artifact_files(directory: Path):
    for path in sorted(directory.rglob("*")):
        if path.is_file() and not path.name.endswith(SIDECAR_SUFFIX):
            yield path


def _load_text_artifacts(root: Path, ctx: _Ctx, bundle: EvidenceBundle) -> None:
    directory = root / TEXT_DIR
    if not directory.is_dir():
        return
    parsed = errors = 0
    for path in _iter_artifact_files(directory):
        rel = str(path.relative_to(root))
        sidecar = path.with_name(path.name + SIDECAR_SUFFIX)
        try:
            body = path.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            errors += 1
            ctx.issues.append(ParseIssue(rel, 0, "not valid UTF-8 text"))
            continue
        spans: list[AuthorSpan] = []
        if sidecar.is_file():
            try:
                attrib = json.loads(sidecar.read_text(encoding="utf-8"))
                for entry in attrib.get("authors", []):
                    span = AuthorSpan(
                        student=str(entry["student"]),
                        word_count=int(entry["word_count"]),
                        char_count=int(entry["char_count"]),
                    )
                    if span.word_count < 0 or span.char_count < 0:
                        raise ValueError("negative span counts")
                    if span.student not in ctx.roster_ids:
                        ctx.issues.append(
                            ParseIssue(rel, 0, f"attribution references unknown student {span.student!r}")
                        )
                    spans.append(span)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                errors += 1
                ctx.issues.append(ParseIssue(rel, 0, f"bad attribution sidecar: {exc}"))
                continue
        else:
            ctx.issues.append(ParseIssue(rel, 0, "missing attribution sidecar; artifact kept unattributed"))
        total_words = len(body.split())
        if sum(s.word_count for s in spans) > total_words:
            ctx.issues.append(ParseIssue(rel, 0, "attributed word counts exceed document word count"))
        bundle.text_artifacts.append(TextArtifact(path=rel, per_author_spans=spans, body=body))
        parsed += 1
    ctx.count(TEXT_DIR, parsed, errors)


def _load_media_artifacts(root: Path, ctx: _Ctx, bundle: EvidenceBundle) -> None:
    directory = root / MEDIA_DIR
    if not directory.is_dir():
        return
    parsed = errors = 0
    for path in _iter_artifact_files(directory):
        rel = str(path.relative_to(root))
        sidecar = path.with_name(path.name + SIDECAR_SUFFIX)
        if not sidecar.is_file():
            errors += 1
            ctx.issues.append(ParseIssue(rel, 0, "media artifact without attribution sidecar"))
            continue
        try:
            attrib = json.loads(sidecar.read_text(encoding="utf-8"))
            kind = MediaKind(attrib["kind"])
            author = str(attrib["author"])
            duration = attrib.get("duration_seconds")
            pages = attrib.get("page_count")
            if kind in (MediaKind.AUDIO, MediaKind.VIDEO):
                if duration is None:
                    raise ValueError(f"{kind.value} requires duration_seconds")
            elif duration is not None:
                raise ValueError(f"duration_seconds not allowed for kind {kind.value}")
            if kind is MediaKind.SLIDES:
                if pages is None:
                    raise ValueError("slides require page_count")
            elif pages is not None:
                raise ValueError(f"page_count not allowed for kind {kind.value}")
            if author not in ctx.roster_ids:
                ctx.issues.append(ParseIssue(rel, 0, f"media author not in roster: {author!r}"))
            artifact = MediaArtifact(
                path=rel,
                author=author,
                kind=kind,
                size_bytes=int(attrib.get("size_bytes", path.stat().st_size)),
                duration_seconds=float(duration) if duration is not None else None,
                page_count=int(pages) if pages is not None else None,
            )
            bundle.media_artifacts.append(artifact)
            parsed += 1
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            errors += 1
            ctx.issues.append(ParseIssue(rel, 0, f"bad media sidecar: {exc}"))
    ctx.count(MEDIA_DIR, parsed, errors)


def _check_reply_targets(ctx: _Ctx, bundle: EvidenceBundle) -> None:
    seen: dict[str, Any] = {}
    for msg in sorted(bundle.chat_messages, key=lambda m: (m.timestamp, m.id)):
        if msg.reply_to is not None:
            target = seen.get(msg.reply_to)
            if target is None:
                ctx.issues.append(
                    ParseIssue("chat", 0, f"message {msg.id!r} replies to unknown or later message {msg.reply_to!r}")
                )
        seen[msg.id] = msg


def write_bundle_json(result_or_bundle, fh: io.TextIOBase) -> None:
    """Serialise a bundle to its canonical JSON form (round-trippable)."""
    from ..canonical import canonical_json

    bundle = getattr(result_or_bundle, "bundle", result_or_bundle)
    fh.write(canonical_json(bundle.to_dict()))

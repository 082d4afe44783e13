"""Shared fixtures: a programmatic evidence-bundle writer used across the suite."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

SOURCE_KINDS = ["git-author", "chat-handle", "email-address", "meeting-name", "task-assignee", "pa-name"]


class BundleBuilder:
    """Writes a bundle directory piece by piece; defaults to self-aliasing identities."""

    def __init__(
        self,
        root: Path,
        roster: tuple[str, ...] = ("alice", "bob", "carol"),
        start: str = "2026-01-05T00:00:00+00:00",
        end: str = "2026-01-19T00:00:00+00:00",
        team_grade: float = 70.0,
        project_id: str = "proj-1",
    ):
        self.root = Path(root)
        self.roster = list(roster)
        self.start = start
        self.end = end
        self.team_grade = team_grade
        self.project_id = project_id
        self.task_description: str | None = None
        self.commit_log_lines: list[str] = []
        self.chat_lines: list[str] = []
        self.email_lines: list[str] = []
        self.meetings: list[dict] = []
        self.tasks: list[dict] = []
        self.pa_rows: list[str] = []
        self.context: list[dict] = []
        self.texts: list[tuple[str, str, list[dict]]] = []
        self.media: list[tuple[str, bytes, dict]] = []
        self.extra_identities: list[dict] = []
        self._msg_seq = 0

    def add_commit(self, author: str, ts: str, numstat: list[str], subject: str = "update", sha: str | None = None):
        sha = sha or f"c{len(self.commit_log_lines):07x}{'0' * 32}"
        self.commit_log_lines.append(f"@@@{sha}|{author}|{ts}|{subject}")
        self.commit_log_lines.extend(numstat)
        return sha

    def add_chat(self, sender: str, ts: str, text: str, reply_to: str | None = None,
                 mentions: list[str] | None = None, channel: str = "general", msg_id: str | None = None):
        self._msg_seq += 1
        msg_id = msg_id or f"m{self._msg_seq:04d}"
        self.chat_lines.append(json.dumps({
            "id": msg_id, "sender": sender, "ts": ts, "text": text,
            "reply_to": reply_to, "mentions": mentions or [], "channel": channel,
        }))
        return msg_id

    def add_raw_chat_line(self, line: str):
        self.chat_lines.append(line)

    def add_email(self, sender: str, recipients: list[str], ts: str, subject: str = "", body: str = ""):
        self.email_lines.append(json.dumps({
            "sender": sender, "recipients": recipients, "ts": ts, "subject": subject, "body": body,
        }))

    def add_meeting(self, start: str, duration_minutes: float, attendees: list[str], minutes: str = ""):
        self.meetings.append({
            "start": start, "duration_minutes": duration_minutes,
            "attendees": attendees, "minutes": minutes,
        })

    def add_task(self, task_id: str, title: str, assignee: str, created: str, status: str = "open",
                 due: str | None = None, completed_at: str | None = None, description: str = ""):
        self.tasks.append({
            "id": task_id, "title": title, "description": description, "assignee": assignee,
            "created": created, "due": due, "completed_at": completed_at, "status": status,
        })

    def add_pa(self, rater: str, ratee: str, category: str, score: int, comment: str = ""):
        self.pa_rows.append(f"{rater},{ratee},{category},{score},{comment}")

    def add_absence(self, student: str, start: str, end: str, note: str = ""):
        self.context.append({
            "student": student, "kind": "personal-circumstance-absence",
            "start": start, "end": end, "note": note,
        })

    def add_past_grade(self, student: str, value: float, note: str = ""):
        self.context.append({"student": student, "kind": "past-grade", "value": value, "note": note})

    def add_text(self, name: str, body: str, authors: list[tuple[str, int, int]]):
        spans = [{"student": s, "word_count": w, "char_count": c} for s, w, c in authors]
        self.texts.append((name, body, spans))

    def add_media(self, name: str, author: str, kind: str, size_bytes: int = 1024,
                  duration_seconds: float | None = None, page_count: int | None = None):
        sidecar: dict = {"author": author, "kind": kind, "size_bytes": size_bytes}
        if duration_seconds is not None:
            sidecar["duration_seconds"] = duration_seconds
        if page_count is not None:
            sidecar["page_count"] = page_count
        self.media.append((name, b"\x00" * min(size_bytes, 64), sidecar))

    def write(self) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        manifest = {
            "project_id": self.project_id,
            "window": {"start": self.start, "end": self.end},
            "team_grade": self.team_grade,
            "roster": [{"id": s, "display_name": s.capitalize()} for s in self.roster],
        }
        if self.task_description is not None:
            (self.root / "task.txt").write_text(self.task_description, encoding="utf-8")
            manifest["task_description"] = "task.txt"
        (self.root / "manifest.json").write_text(json.dumps(manifest, indent=1), encoding="utf-8")

        entries = [
            {"alias": s, "source_kind": kind, "student": {"id": s, "display_name": s.capitalize()}}
            for s in self.roster
            for kind in SOURCE_KINDS
        ] + self.extra_identities
        (self.root / "identities.json").write_text(json.dumps({"entries": entries}), encoding="utf-8")

        if self.commit_log_lines:
            (self.root / "commits.log").write_text("\n".join(self.commit_log_lines) + "\n", encoding="utf-8")
        if self.chat_lines:
            (self.root / "chat").mkdir(exist_ok=True)
            (self.root / "chat" / "main.jsonl").write_text("\n".join(self.chat_lines) + "\n", encoding="utf-8")
        if self.email_lines:
            (self.root / "email").mkdir(exist_ok=True)
            (self.root / "email" / "box.jsonl").write_text("\n".join(self.email_lines) + "\n", encoding="utf-8")
        if self.meetings:
            (self.root / "meetings.json").write_text(json.dumps(self.meetings), encoding="utf-8")
        if self.tasks:
            (self.root / "tasks.json").write_text(json.dumps(self.tasks), encoding="utf-8")
        if self.pa_rows:
            (self.root / "pa.csv").write_text(
                "rater,ratee,category,score,comment\n" + "\n".join(self.pa_rows) + "\n", encoding="utf-8"
            )
        if self.context:
            (self.root / "context.json").write_text(json.dumps(self.context), encoding="utf-8")
        if self.texts:
            text_dir = self.root / "text"
            text_dir.mkdir(exist_ok=True)
            for name, body, spans in self.texts:
                (text_dir / name).write_text(body, encoding="utf-8")
                (text_dir / f"{name}.attrib.json").write_text(json.dumps({"authors": spans}), encoding="utf-8")
        if self.media:
            media_dir = self.root / "media"
            media_dir.mkdir(exist_ok=True)
            for name, blob, sidecar in self.media:
                (media_dir / name).write_bytes(blob)
                (media_dir / f"{name}.attrib.json").write_text(json.dumps(sidecar), encoding="utf-8")
        return self.root


@pytest.fixture
def bundle_builder(tmp_path):
    def make(**kwargs) -> BundleBuilder:
        return BundleBuilder(tmp_path / "bundle", **kwargs)

    return make

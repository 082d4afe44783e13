"""Deterministic generator of labelled synthetic evidence bundles.

Each bundle holds one team whose "balanced" members are generated with identical
behaviour (identical counts, lengths, timings and texts), so every metric column is
equal across them; an archetype member perturbs exactly one evidence family. That
keeps the fired conflict markers predictable from the archetype alone, which is what
the shipped label registry encodes:

    loafer             zero submission volume      -> (Quantity, B), (Quality, B)
    hog                9x submission volume        -> (Quantity, A)
    ghost              absent from chat/meetings   -> (Presence, B)
    poor-communicator  one-char replies, slow     -> (Effectiveness, B)
    late-starter       late commits, missed dues   -> (Adherence, B)
    clique-member      replies to one peer only    -> (no default-mask marker; the
                       signal lives in the interaction-diversity metric)

Labels are calibrated for the default configuration with one archetype at intensity
>= 0.8 in a 3-student team and verified end-to-end by the acceptance suite. Lower
intensities generate correspondingly weaker behaviour but no label guarantees.

All chat, commit and document texts are sentiment-neutral against the shipped
lexicon so the Tone benchmark stays flat unless an archetype targets it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from random import Random

LABEL_INTENSITY = 0.8

DEFAULT_WINDOW = ("2026-03-02T00:00:00+00:00", "2026-03-16T00:00:00+00:00")

OPENER_TEMPLATES = (
    "status update on the data pipeline and figures",
    "afternoon sync notes are in the shared folder",
    "pushed the latest changes for the ingest module",
    "notes from today are on the repository wiki",
    "draft numbers for the midweek checkpoint attached",
    "schedule reminder for the next review session",
)
REPLY_TEXT = "noted, proceeding as planned"
TERSE_TEXT = "."  # no readable words: chars-per-message and readability both bottom out

COMMIT_TEMPLATES = (
    "extend ingest module with csv support",
    "update analysis notebook structure",
    "reorganise plotting utilities",
    "expand unit test scaffolding",
    "adjust configuration defaults",
    "document data schema assumptions",
)

DOC_PARAGRAPH = (
    "The team collected the dataset and cleaned the records. "
    "We describe the method in plain steps. "
    "Each figure shows one result. "
    "The final section lists open questions."
)

TASK_TITLES = (
    "Draft the findings section",
    "Implement the data module",
    "Organise the weekly agenda",
)

GOALS_TEXT = (
    "Goal: Deliver a reproducible analysis of the collected dataset.\n"
    "Goal: Document findings in a structured final report.\n"
)

OUTCOME_LINE = "Outcome: reviewed analysis of the collected dataset and planned the structured final report"


class Archetype(str, Enum):
    BALANCED = "balanced"
    LOAFER = "loafer"
    HOG = "hog"
    GHOST = "ghost"
    CLIQUE_MEMBER = "clique-member"
    POOR_COMMUNICATOR = "poor-communicator"
    LATE_STARTER = "late-starter"


LABEL_REGISTRY: dict[Archetype, tuple[tuple[str, str], ...]] = {
    Archetype.BALANCED: (),
    Archetype.LOAFER: (("Quantity", "B"), ("Quality", "B")),
    Archetype.HOG: (("Quantity", "A"),),
    Archetype.GHOST: (("Presence", "B"),),
    Archetype.CLIQUE_MEMBER: (),
    Archetype.POOR_COMMUNICATOR: (("Effectiveness", "B"),),
    Archetype.LATE_STARTER: (("Adherence", "B"),),
}


@dataclass(frozen=True)
class BehaviourProfile:
    student: str
    archetype: Archetype = Archetype.BALANCED
    intensity: float = 1.0

    @classmethod
    def from_dict(cls, d: dict) -> "BehaviourProfile":
        return cls(
            student=str(d["student"]),
            archetype=Archetype(d.get("archetype", "balanced")),
            intensity=float(d.get("intensity", 1.0)),
        )


def _iso(dt: datetime) -> str:
    return dt.isoformat()


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def generate(
    profiles: list[BehaviourProfile],
    seed: int,
    out_dir: Path | str,
    window: tuple[str, str] = DEFAULT_WINDOW,
) -> Path:
    """Write a loadable bundle plus labels.json; same inputs produce identical bytes."""
    if len(profiles) < 2:
        raise ValueError("need at least 2 behaviour profiles")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = Random(seed)
    start = datetime.fromisoformat(window[0]).astimezone(timezone.utc)

    students = [p.student for p in profiles]
    by_student = {p.student: p for p in profiles}
    n = len(students)

    # shared per-bundle parameters; identical for every balanced member
    commit_count = 6 + rng.randrange(3)
    rounds = 36 + 3 * rng.randrange(3)
    meeting_days = (2, 5, 8, 11)

    manifest = {
        "project_id": f"synth-{seed}",
        "window": {"start": window[0], "end": window[1]},
        "team_grade": 70.0,
        "roster": [{"id": s, "display_name": s.capitalize()} for s in students],
        "task_description": "task.txt",
    }
    (out / "manifest.json").write_text(_dump(manifest), encoding="utf-8")
    (out / "task.txt").write_text(GOALS_TEXT, encoding="utf-8")

    kinds = ["git-author", "chat-handle", "email-address", "meeting-name", "task-assignee", "pa-name"]
    identities = {
        "entries": [
            {"alias": s, "source_kind": k, "student": {"id": s, "display_name": s.capitalize()}}
            for s in students
            for k in kinds
        ]
    }
    (out / "identities.json").write_text(_dump(identities), encoding="utf-8")

    _write_commits(out, start, students, by_student, commit_count)
    _write_chat(out, start, students, by_student, rounds)
    _write_meetings_and_tasks(out, start, students, by_student, meeting_days)
    _write_documents(out, students, by_student)

    labels = []
    for profile in profiles:
        if profile.intensity >= LABEL_INTENSITY:
            for benchmark, scenario in LABEL_REGISTRY[profile.archetype]:
                labels.append({"benchmark": benchmark, "scenario": scenario, "student": profile.student})
    labels.sort(key=lambda m: (m["benchmark"], m["scenario"], m["student"]))
    (out / "labels.json").write_text(
        _dump({
            "labels": labels,
            "config": "default",
            "profiles": [
                {"student": p.student, "archetype": p.archetype.value, "intensity": p.intensity}
                for p in profiles
            ],
            "seed": seed,
        }),
        encoding="utf-8",
    )
    return out


def _write_commits(out: Path, start: datetime, students: list[str], by_student, commit_count: int) -> None:
    lines: list[str] = []
    serial = 0
    for idx, student in enumerate(students):
        profile = by_student[student]
        count = commit_count
        day_lo, day_hi = 1.0, 13.0
        if profile.archetype is Archetype.LOAFER:
            count = round(commit_count * (1.0 - profile.intensity))
        elif profile.archetype is Archetype.HOG:
            count = round(commit_count * (1.0 + 8.0 * profile.intensity))
        elif profile.archetype is Archetype.LATE_STARTER:
            day_lo = 1.0 + 11.0 * profile.intensity
        for j in range(count):
            position = 0.5 if count == 1 else j / (count - 1)
            day = day_lo + position * (day_hi - day_lo)
            ts = start + timedelta(days=day, hours=20, minutes=3 * idx)
            serial += 1
            sha = f"{serial:07x}{'0' * 33}"
            message = COMMIT_TEMPLATES[j % len(COMMIT_TEMPLATES)]
            lines.append(f"@@@{sha}|{student}|{_iso(ts)}|{message}")
            lines.append(f"24\t4\tsrc/mod_{j % 5}.py")
    if lines:
        (out / "commits.log").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _chat_active(profile: BehaviourProfile) -> bool:
    return not (profile.archetype is Archetype.GHOST and profile.intensity >= LABEL_INTENSITY)


def _write_chat(out: Path, start: datetime, students: list[str], by_student, rounds: int) -> None:
    messages: list[dict] = []
    last_message_of: dict[str, str] = {}
    serial = 0

    def post(sender: str, ts: datetime, text: str, reply_to: str | None) -> str:
        nonlocal serial
        serial += 1
        msg_id = f"m{serial:05d}"
        messages.append({
            "id": msg_id, "sender": sender, "ts": _iso(ts), "text": text,
            "reply_to": reply_to, "mentions": [], "channel": "team",
        })
        last_message_of[sender] = msg_id
        return msg_id

    n = len(students)
    for r in range(rounds):
        day = 1 + r // 3
        hour = 9 + 4 * (r % 3)
        t0 = start + timedelta(days=day, hours=hour)
        opener = students[r % n]
        opener_profile = by_student[opener]
        opener_id: str | None = None
        if _chat_active(opener_profile):
            text = OPENER_TEMPLATES[r % len(OPENER_TEMPLATES)]
            if opener_profile.archetype is Archetype.POOR_COMMUNICATOR and opener_profile.intensity >= 0.5:
                text = TERSE_TEXT
            opener_id = post(opener, t0, text, None)
        for k, student in enumerate(students):
            if student == opener:
                continue
            profile = by_student[student]
            if not _chat_active(profile):
                continue
            latency_min = 10.0
            text = REPLY_TEXT
            if profile.archetype is Archetype.POOR_COMMUNICATOR:
                latency_min = 10.0 + 590.0 * profile.intensity
                if profile.intensity >= 0.5:
                    text = TERSE_TEXT
            target = opener_id
            if profile.archetype is Archetype.CLIQUE_MEMBER and profile.intensity >= 0.5:
                buddy = students[(students.index(student) + 1) % n]
                target = last_message_of.get(buddy, opener_id)
            ts = t0 + timedelta(minutes=latency_min)
            post(student, ts, text, target if target is not None else None)

    if messages:
        (out / "chat").mkdir(exist_ok=True)
        payload = "\n".join(json.dumps(m, sort_keys=True, ensure_ascii=False) for m in messages)
        (out / "chat" / "team.jsonl").write_text(payload + "\n", encoding="utf-8")


def _write_meetings_and_tasks(out: Path, start: datetime, students: list[str], by_student, meeting_days) -> None:
    meetings = []
    for m_index, day in enumerate(meeting_days):
        attendees = []
        for student in students:
            profile = by_student[student]
            if profile.archetype is Archetype.GHOST and profile.intensity >= LABEL_INTENSITY:
                continue
            attendees.append(student)
        minutes_lines = [OUTCOME_LINE]
        if m_index < len(TASK_TITLES):
            for student in students:
                profile = by_student[student]
                if profile.archetype is Archetype.LATE_STARTER and profile.intensity >= 0.5:
                    continue
                minutes_lines.append(f"Done: {student}: {TASK_TITLES[m_index]}")
        meetings.append({
            "start": _iso(start + timedelta(days=day, hours=15)),
            "duration_minutes": 45,
            "attendees": attendees,
            "minutes": "\n".join(minutes_lines),
        })
    (out / "meetings.json").write_text(_dump(meetings), encoding="utf-8")

    tasks = []
    due_days = (4, 8, 12)
    for student in students:
        profile = by_student[student]
        for t_index, title in enumerate(TASK_TITLES):
            due = start + timedelta(days=due_days[t_index], hours=23)
            completed = due - timedelta(hours=20)
            if profile.archetype is Archetype.LATE_STARTER:
                completed = due + timedelta(hours=30.0 * profile.intensity)
            tasks.append({
                "id": f"{student}-t{t_index + 1}",
                "title": title,
                "description": "",
                "assignee": student,
                "created": _iso(start + timedelta(days=1, hours=9)),
                "due": _iso(due),
                "completed_at": _iso(completed),
                "status": "done",
            })
    (out / "tasks.json").write_text(_dump(tasks), encoding="utf-8")


def _write_documents(out: Path, students: list[str], by_student) -> None:
    text_dir = out / "text"
    wrote = False
    for student in students:
        profile = by_student[student]
        repeats = 3
        if profile.archetype is Archetype.LOAFER:
            repeats = round(3 * (1.0 - profile.intensity))
        elif profile.archetype is Archetype.HOG:
            repeats = round(3 * (1.0 + 8.0 * profile.intensity))
        if repeats <= 0:
            continue
        if not wrote:
            text_dir.mkdir(exist_ok=True)
            wrote = True
        body = "\n\n".join([DOC_PARAGRAPH] * repeats) + "\n"
        name = f"report_{student}.md"
        (text_dir / name).write_text(body, encoding="utf-8")
        sidecar = {
            "authors": [{
                "student": student,
                "word_count": len(body.split()),
                "char_count": len(body),
            }]
        }
        (text_dir / f"{name}.attrib.json").write_text(_dump(sidecar), encoding="utf-8")


def load_profiles(path: Path | str) -> list[BehaviourProfile]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get("profiles", [])
    return [BehaviourProfile.from_dict(d) for d in data]


def standard_team(archetype: Archetype, intensity: float = 1.0) -> list[BehaviourProfile]:
    """The calibrated 3-student layout: one archetype member plus two balanced peers."""
    return [
        BehaviourProfile("s1", archetype, intensity),
        BehaviourProfile("s2", Archetype.BALANCED, 0.0),
        BehaviourProfile("s3", Archetype.BALANCED, 0.0),
    ]

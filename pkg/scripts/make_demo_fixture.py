"""Writes the hand-designed 4-student demo bundle under tests/fixtures/demo_bundle.

The numbers here are the source for the hand-computed assertions in the test suite;
change them only together with those tests.
"""

from __future__ import annotations

import json
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "demo_bundle"

STUDENTS = ["alice", "bob", "carol", "dan"]
ALIASES = {
    "git-author": {"Alice Chen": "alice", "bob-w": "bob", "Carol Ngu": "carol", "Dan Petrov": "dan"},
    "chat-handle": {"alice": "alice", "bobw": "bob", "carol.n": "carol", "dan_p": "dan"},
    "email-address": {f"{s}@uni.edu": s for s in STUDENTS},
    "meeting-name": {"Alice": "alice", "Bob": "bob", "Carol": "carol", "Dan": "dan"},
    "task-assignee": {s: s for s in STUDENTS},
    "pa-name": {s: s for s in STUDENTS},
}


def j(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def main() -> None:
    if ROOT.exists():
        shutil.rmtree(ROOT)
    ROOT.mkdir(parents=True)

    (ROOT / "manifest.json").write_text(j({
        "project_id": "weather-dashboard",
        "window": {"start": "2026-01-05T00:00:00+00:00", "end": "2026-01-19T00:00:00+00:00"},
        "team_grade": 68.0,
        "roster": [
            {"id": "alice", "display_name": "Alice Chen"},
            {"id": "bob", "display_name": "Bob Weaver"},
            {"id": "carol", "display_name": "Carol Ngu"},
            {"id": "dan", "display_name": "Dan Petrov"},
        ],
        "task_description": "task.txt",
    }))

    (ROOT / "task.txt").write_text(
        "Goal: Build a weather dashboard that ingests live data.\n"
        "Goal: Evaluate forecast accuracy in a written report.\n"
        "The team of four delivers a working dashboard and a final report.\n"
    )

    entries = []
    for kind, mapping in ALIASES.items():
        for alias, student in mapping.items():
            entries.append({"alias": alias, "source_kind": kind,
                            "student": {"id": student, "display_name": student.capitalize()}})
    (ROOT / "identities.json").write_text(j({"entries": entries}))

    commits = [
        # alice: 5 commits in window
        ("a100001", "Alice Chen", "2026-01-06T09:30:00+00:00", "scaffold ingest pipeline",
         ["42\t0\tsrc/ingest.py", "10\t0\tREADME.md"]),
        ("a100002", "Alice Chen", "2026-01-07T14:10:00+00:00", "parse station feeds",
         ["35\t6\tsrc/ingest.py"]),
        ("a100003", "Alice Chen", "2026-01-09T11:05:00+00:00", "add caching layer",
         ["28\t3\tsrc/cache.py"]),
        ("a100004", "Alice Chen", "2026-01-11T16:45:00+00:00", "wire dashboard widgets",
         ["51\t9\tsrc/dashboard.py", "-\t-\tassets/logo.png"]),
        ("a100005", "Alice Chen", "2026-01-13T10:20:00+00:00", "tidy config handling",
         ["12\t15\tsrc/config.py"]),
        # bob: 3 commits
        ("b200001", "bob-w", "2026-01-07T10:00:00+00:00", "layout grid prototype",
         ["30\t0\tsrc/layout.css"]),
        ("b200002", "bob-w", "2026-01-10T15:30:00+00:00", "responsive panels",
         ["22\t4\tsrc/layout.css"]),
        ("b200003", "b200003-bad-header", "", "", []),  # replaced below by a malformed? no: keep valid
    ]
    # keep the log well-formed: bob's third commit is a normal one
    commits[-1] = ("b200003", "bob-w", "2026-01-14T09:15:00+00:00", "polish chart colors",
                   ["9\t2\tsrc/layout.css"])
    commits += [
        # carol: 2 commits
        ("c300001", "Carol Ngu", "2026-01-08T13:00:00+00:00", "draft evaluation outline",
         ["18\t0\tdocs/evaluation.md"]),
        ("c300002", "Carol Ngu", "2026-01-13T17:40:00+00:00", "expand accuracy tables",
         ["26\t5\tdocs/evaluation.md"]),
        # dan: 1 out-of-window spike + 1 in-window commit
        ("d400001", "Dan Petrov", "2026-01-03T20:00:00+00:00", "metrics survey notes",
         ["14\t0\tdocs/metrics.md"]),
        ("d400002", "Dan Petrov", "2026-01-12T12:00:00+00:00", "accuracy metric helpers",
         ["20\t2\tsrc/metrics.py"]),
    ]
    lines = []
    for sha, author, ts, subject, numstat in commits:
        lines.append(f"@@@{sha}|{author}|{ts}|{subject}")
        lines.extend(numstat)
    (ROOT / "commits.log").write_text("\n".join(lines) + "\n")

    chat = [
        {"id": "m01", "sender": "alice", "ts": "2026-01-05T09:00:00+00:00",
         "text": "kickoff thread for the dashboard project", "reply_to": None, "mentions": [], "channel": "general"},
        {"id": "m02", "sender": "bobw", "ts": "2026-01-05T09:25:00+00:00",
         "text": "thanks for setting this up, layout ideas incoming", "reply_to": "m01", "mentions": [], "channel": "general"},
        {"id": "m03", "sender": "carol.n", "ts": "2026-01-05T10:00:00+00:00",
         "text": "great, I will start the evaluation outline", "reply_to": "m01", "mentions": [], "channel": "general"},
        {"id": "m04", "sender": "alice", "ts": "2026-01-06T11:00:00+00:00",
         "text": "ingest skeleton pushed, feedback welcome", "reply_to": None, "mentions": ["bobw"], "channel": "dev"},
        {"id": "m05", "sender": "bobw", "ts": "2026-01-06T11:40:00+00:00",
         "text": "looks clean, wiring panels next", "reply_to": "m04", "mentions": [], "channel": "dev"},
        {"id": "m06", "sender": "dan_p", "ts": "2026-01-07T18:00:00+00:00",
         "text": "sorry for the silence, metrics notes are late", "reply_to": None, "mentions": [], "channel": "general"},
        {"id": "m07", "sender": "alice", "ts": "2026-01-08T09:10:00+00:00",
         "text": "no problem, can you review the accuracy section", "reply_to": "m06", "mentions": ["dan_p"], "channel": "general"},
        {"id": "m08", "sender": "carol.n", "ts": "2026-01-09T14:00:00+00:00",
         "text": "evaluation outline is in docs, comments welcome", "reply_to": None, "mentions": ["alice"], "channel": "docs"},
        {"id": "m09", "sender": "alice", "ts": "2026-01-09T14:30:00+00:00",
         "text": "nice structure, adding data notes", "reply_to": "m08", "mentions": [], "channel": "docs"},
        {"id": "m10", "sender": "dan_p", "ts": "2026-01-12T12:30:00+00:00",
         "text": "metric helpers are pushed now", "reply_to": None, "mentions": [], "channel": "dev"},
        {"id": "m11", "sender": "bobw", "ts": "2026-01-12T13:00:00+00:00",
         "text": "charts hooked to helpers, works well", "reply_to": "m10", "mentions": [], "channel": "dev"},
        {"id": "m12", "sender": "alice", "ts": "2026-01-14T10:00:00+00:00",
         "text": "draft report review on friday, please read before", "reply_to": None, "mentions": ["carol.n", "dan_p"], "channel": "general"},
        {"id": "m13", "sender": "carol.n", "ts": "2026-01-14T10:45:00+00:00",
         "text": "will do, tables are nearly final", "reply_to": "m12", "mentions": [], "channel": "general"},
        {"id": "m14", "sender": "bobw", "ts": "2026-01-16T09:00:00+00:00",
         "text": "screenshots exported for the appendix", "reply_to": None, "mentions": [], "channel": "docs"},
    ]
    (ROOT / "chat").mkdir()
    (ROOT / "chat" / "main.jsonl").write_text(
        "\n".join(json.dumps(m, sort_keys=True, ensure_ascii=False) for m in chat) + "\n"
    )

    emails = [
        {"sender": "alice@uni.edu", "recipients": ["bob@uni.edu", "carol@uni.edu", "dan@uni.edu"],
         "ts": "2026-01-05T08:00:00+00:00", "subject": "project plan",
         "body": "Plan for the two weeks attached. Milestones are listed per person."},
        {"sender": "carol@uni.edu", "recipients": ["alice@uni.edu"],
         "ts": "2026-01-10T09:00:00+00:00", "subject": "evaluation draft",
         "body": "First full draft of the evaluation is ready for your read."},
        {"sender": "dan_p...oops", "recipients": ["alice@uni.edu"],
         "ts": "2026-01-11T09:00:00+00:00", "subject": "metrics list",
         "body": "Candidate metrics with references inside."},
    ]
    # the third email sender is intentionally an unknown address? No: fixture must be
    # fully resolved. Use dan's proper address.
    emails[2]["sender"] = "dan@uni.edu"
    (ROOT / "email").mkdir()
    (ROOT / "email" / "box.jsonl").write_text(
        "\n".join(json.dumps(e, sort_keys=True, ensure_ascii=False) for e in emails) + "\n"
    )

    meetings = [
        {"start": "2026-01-07T15:00:00+00:00", "duration_minutes": 60,
         "attendees": ["Alice", "Bob", "Carol", "Dan"],
         "minutes": "Outcome: agreed on dashboard architecture and live data source\n"
                    "Task: Build the ingest pipeline => alice [coding]\n"
                    "Task: Draft the evaluation report => carol [writing]\n"
                    "Done: alice: repository skeleton ready"},
        {"start": "2026-01-10T15:00:00+00:00", "duration_minutes": 45,
         "attendees": ["Alice", "Bob", "Carol"],
         "minutes": "Outcome: reviewed dashboard layout and evaluation outline\n"
                    "Done: bob: dashboard layout grid\n"
                    "Done: carol: evaluation outline"},
        {"start": "2026-01-14T15:00:00+00:00", "duration_minutes": 30,
         "attendees": ["Alice", "Bob", "Dan"],
         "minutes": "Outcome: planned the final report assembly and demo recording\n"
                    "Done: dan: accuracy metric helpers"},
    ]
    (ROOT / "meetings.json").write_text(j(meetings))

    tasks = [
        {"id": "t1", "title": "Implement the ingest pipeline", "description": "live data collection",
         "assignee": "alice", "created": "2026-01-05T12:00:00+00:00", "due": "2026-01-10T00:00:00+00:00",
         "completed_at": "2026-01-09T12:00:00+00:00", "status": "done"},
        {"id": "t2", "title": "Review the final report draft", "description": "",
         "assignee": "alice", "created": "2026-01-12T12:00:00+00:00", "due": "2026-01-16T00:00:00+00:00",
         "completed_at": "2026-01-17T10:00:00+00:00", "status": "done"},
        {"id": "t3", "title": "Design the dashboard layout", "description": "panel grid and charts",
         "assignee": "bob", "created": "2026-01-05T12:00:00+00:00", "due": "2026-01-11T00:00:00+00:00",
         "completed_at": "2026-01-10T16:00:00+00:00", "status": "done"},
        {"id": "t4", "title": "Draft the evaluation report", "description": "accuracy write-up",
         "assignee": "carol", "created": "2026-01-05T12:00:00+00:00", "due": "2026-01-14T00:00:00+00:00",
         "completed_at": "2026-01-13T18:00:00+00:00", "status": "done"},
        {"id": "t5", "title": "Organise the weekly meetings", "description": "agendas and notes",
         "assignee": "carol", "created": "2026-01-05T12:00:00+00:00", "due": "2026-01-18T00:00:00+00:00",
         "completed_at": None, "status": "open"},
        {"id": "t6", "title": "Research forecast accuracy metrics", "description": "",
         "assignee": "dan", "created": "2026-01-05T12:00:00+00:00", "due": None,
         "completed_at": "2026-01-12T11:00:00+00:00", "status": "done"},
    ]
    (ROOT / "tasks.json").write_text(j(tasks))

    (ROOT / "pa.csv").write_text(
        "rater,ratee,category,score,comment\n"
        "alice,bob,tone,4,professional in reviews\n"
        "alice,carol,support,5,kept everyone unblocked\n"
        "bob,alice,quantity,5,\n"
        "bob,dan,tone,2,short replies\n"
        "carol,alice,communication,4,\n"
        "carol,bob,vibes,3,hard to place\n"
        "dan,alice,effort,4,\n"
        "dan,carol,support,4,\n"
    )

    (ROOT / "context.json").write_text(j([
        {"student": "carol", "kind": "personal-circumstance-absence",
         "start": "2026-01-08T00:00:00+00:00", "end": "2026-01-11T00:00:00+00:00",
         "note": "documented illness"},
        {"student": "alice", "kind": "past-grade", "value": 75, "note": "previous module"},
        {"student": "bob", "kind": "past-grade", "value": 62, "note": "previous module"},
        {"student": "dan", "kind": "past-grade", "value": 70, "note": "previous module"},
    ]))

    text_dir = ROOT / "text"
    text_dir.mkdir()
    report_body = (
        "The dashboard shows live weather for six cities. We compare forecasts with "
        "observed values each day. The tables list the error for every provider. "
        "Short notes explain the method and its limits. The final section covers "
        "open questions and next steps for the team.\n"
    )
    (text_dir / "report.md").write_text(report_body)
    (text_dir / "report.md.attrib.json").write_text(j({
        "authors": [
            {"student": "carol", "word_count": 34, "char_count": 205},
            {"student": "alice", "word_count": 10, "char_count": 58},
        ]
    }))
    ingest_body = (
        "import json\n\n\n"
        "def fetch(url):\n"
        "    return json.loads(read(url))\n\n\n"
        "def read(url):\n"
        "    raise NotImplementedError\n"
    )
    (text_dir / "ingest.py").write_text(ingest_body)
    (text_dir / "ingest.py.attrib.json").write_text(j({
        "authors": [{"student": "alice", "word_count": 10, "char_count": 110}]
    }))
    layout_body = (
        "The layout uses a three column grid. Panels resize with the window. "
        "Charts share one color scale. Keyboard focus order follows the reading order.\n"
    )
    (text_dir / "layout.md").write_text(layout_body)
    (text_dir / "layout.md.attrib.json").write_text(j({
        "authors": [{"student": "bob", "word_count": 24, "char_count": 146}]
    }))

    media_dir = ROOT / "media"
    media_dir.mkdir()
    for name, payload, sidecar in [
        ("demo.mp4", b"\x00" * 48, {"author": "dan", "kind": "video", "size_bytes": 7340032,
                                     "duration_seconds": 600}),
        ("arch.png", b"\x89PNG fake", {"author": "alice", "kind": "image", "size_bytes": 204800}),
        ("wireframe.png", b"\x89PNG fake2", {"author": "bob", "kind": "image", "size_bytes": 102400}),
    ]:
        (media_dir / name).write_bytes(payload)
        (media_dir / f"{name}.attrib.json").write_text(j(sidecar))

    print(f"demo bundle written to {ROOT}")


if __name__ == "__main__":
    main()

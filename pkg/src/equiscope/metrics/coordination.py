"""Coordination metrics from meeting attendance and task records.

Attendance skew splits the meetings in date order into a first and second half
(odd counts put the middle meeting in the first half) and reports the attendance-rate
difference, positive when engagement faded. Deadline adherence is the fraction of a
student's due-dated tasks completed by their due date.
"""

from __future__ import annotations

from math import ceil

from ..evidence.types import EvidenceBundle, TaskStatus
from .table import MetricTable


def coordination_metrics(bundle: EvidenceBundle) -> MetricTable:
    table = MetricTable(roster=bundle.roster_ids)
    roster = bundle.roster_ids
    meetings = sorted(bundle.meetings, key=lambda m: m.start)
    held = len(meetings)

    attendance: dict[str, float] = {}
    skew: dict[str, float] = {}
    minutes: dict[str, float] = {}
    minutes_support: dict[str, int] = {}

    first = meetings[: ceil(held / 2)]
    second = meetings[ceil(held / 2):]

    for s in roster:
        attended = [m for m in meetings if s in m.attendees]
        attendance[s] = len(attended) / held if held else 0.0
        minutes[s] = sum(m.duration_minutes for m in attended)
        minutes_support[s] = len(attended)
        if first and second:
            rate1 = sum(1 for m in first if s in m.attendees) / len(first)
            rate2 = sum(1 for m in second if s in m.attendees) / len(second)
            skew[s] = rate1 - rate2
        else:
            skew[s] = 0.0

    held_support = {s: held for s in roster}
    skew_support = {s: held if held >= 2 else 0 for s in roster}
    table.set_column("3a", attendance, held_support)
    table.set_column("3b", skew, skew_support)
    table.set_column("3c", minutes, minutes_support)

    adherence: dict[str, float] = {}
    adherence_support: dict[str, int] = {}
    for s in roster:
        dated = [t for t in bundle.tasks if t.assignee == s and t.due is not None]
        on_time = [
            t for t in dated if t.status is TaskStatus.DONE and t.completed_at is not None and t.completed_at <= t.due
        ]
        adherence[s] = len(on_time) / len(dated) if dated else 0.0
        adherence_support[s] = len(dated)
    table.set_column("deadline_adherence", adherence, adherence_support)
    return table

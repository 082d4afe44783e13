"""Submission metrics: commit volume and timing, authored text volume, media workload.

Net code lines are clamped at zero per commit: pure-deletion refactors should not
produce negative contribution, but still count toward the commit tally. Out-of-window
events stay in the data (they are flagged at load time); timeline positions clamp
into [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

from ..evidence.types import EvidenceBundle, MediaKind
from ..filekinds import is_code_path
from ..stats import weighted_skew
from .readability import flesch_reading_ease
from .table import MetricTable


@dataclass(frozen=True)
class MediaWeights:
    """Workload credit per media artifact: flat for stills, per page or minute otherwise."""

    image: float = 1.0
    other: float = 1.0
    per_page: float = 1.0
    per_minute: float = 1.0

    def weight(self, kind: MediaKind, duration_seconds: float | None, page_count: int | None) -> float:
        if kind is MediaKind.IMAGE:
            return self.image
        if kind is MediaKind.SLIDES:
            return self.per_page * (page_count or 0)
        if kind in (MediaKind.AUDIO, MediaKind.VIDEO):
            return self.per_minute * (duration_seconds or 0.0) / 60.0
        return self.other


def submission_metrics(bundle: EvidenceBundle, media_weights: MediaWeights | None = None) -> MetricTable:
    media_weights = media_weights or MediaWeights()
    table = MetricTable(roster=bundle.roster_ids)

    commits_by_student: dict[str, list] = {s: [] for s in bundle.roster_ids}
    for c in bundle.commits:
        if c.student in commits_by_student:
            commits_by_student[c.student].append(c)

    counts: dict[str, float] = {}
    net_lines: dict[str, float] = {}
    intervals: dict[str, float] = {}
    interval_support: dict[str, int] = {}
    skews: dict[str, float] = {}
    msg_read: dict[str, float] = {}
    commit_support: dict[str, int] = {}

    for student, commits in commits_by_student.items():
        commits.sort(key=lambda c: (c.timestamp, c.sha))
        counts[student] = float(len(commits))
        commit_support[student] = len(commits)
        net_lines[student] = float(sum(max(c.lines_added - c.lines_deleted, 0) for c in commits))

        if len(commits) >= 2:
            gaps = [
                (b.timestamp - a.timestamp).total_seconds() / 3600.0
                for a, b in zip(commits, commits[1:])
            ]
            intervals[student] = sum(gaps) / len(gaps)
            interval_support[student] = len(gaps)
        else:
            # maximal-gap convention: too few commits reads as one project-length gap
            intervals[student] = bundle.window_hours
            interval_support[student] = 0

        positions = [bundle.timeline_position(c.timestamp) for c in commits]
        weights = [float(c.lines_added + c.lines_deleted) for c in commits]
        skews[student] = weighted_skew(positions, weights)

        if commits:
            msg_read[student] = sum(max(0.0, flesch_reading_ease(c.message)) for c in commits) / len(commits)
        else:
            msg_read[student] = 0.0

    table.set_column("1a", counts, commit_support)
    table.set_column("1b", net_lines, commit_support)
    table.set_column("1e", intervals, interval_support)
    table.set_column("1f", skews, commit_support)
    table.set_column("commit_msg_readability", msg_read, commit_support)

    _text_columns(bundle, table)
    _media_column(bundle, table, media_weights)
    return table


def _text_columns(bundle: EvidenceBundle, table: MetricTable) -> None:
    words: dict[str, float] = {}
    chars: dict[str, float] = {}
    span_support: dict[str, int] = {}
    read_weighted: dict[str, float] = {}
    read_weight: dict[str, float] = {}
    read_support: dict[str, int] = {}

    for artifact in bundle.text_artifacts:
        prose = not is_code_path(artifact.path)
        ease = max(0.0, flesch_reading_ease(artifact.body)) if prose else 0.0
        for span in artifact.per_author_spans:
            s = span.student
            if s not in table.roster:
                continue
            words[s] = words.get(s, 0.0) + span.word_count
            chars[s] = chars.get(s, 0.0) + span.char_count
            span_support[s] = span_support.get(s, 0) + 1
            if prose and span.word_count > 0:
                read_weighted[s] = read_weighted.get(s, 0.0) + ease * span.word_count
                read_weight[s] = read_weight.get(s, 0.0) + span.word_count
                read_support[s] = read_support.get(s, 0) + 1

    readability = {
        s: read_weighted[s] / read_weight[s] for s in read_weight if read_weight[s] > 0
    }
    table.set_column("1c", words, span_support)
    table.set_column("1d", chars, span_support)
    table.set_column("1h", readability, read_support)


def _media_column(bundle: EvidenceBundle, table: MetricTable, weights: MediaWeights) -> None:
    load: dict[str, float] = {}
    support: dict[str, int] = {}
    for m in bundle.media_artifacts:
        if m.author not in table.roster:
            continue
        load[m.author] = load.get(m.author, 0.0) + weights.weight(m.kind, m.duration_seconds, m.page_count)
        support[m.author] = support.get(m.author, 0) + 1
    table.set_column("1i", load, support)

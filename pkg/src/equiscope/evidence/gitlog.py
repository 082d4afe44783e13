"""Parser for `git log --numstat` output with the fixed header format.

Expected stream shape, one block per commit:

    @@@<sha>|<author>|<iso-strict date>|<subject>
    <adds>\t<deletes>\t<path>
    ...

Binary files report "-" for both counts and contribute zero lines. A malformed
header produces a parse-error entry with its line number and parsing continues
with the next commit; numstat lines that do not parse are likewise recorded.
"""

from __future__ import annotations

from .types import CommitRecord, ParseIssue, parse_instant

HEADER_PREFIX = "@@@"


def parse_git_numstat(stream: str, filename: str = "commits.log") -> tuple[list[CommitRecord], list[ParseIssue]]:
    commits: list[CommitRecord] = []
    issues: list[ParseIssue] = []
    current: CommitRecord | None = None

    for lineno, raw in enumerate(stream.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith(HEADER_PREFIX):
            current = _parse_header(line, lineno, filename, issues)
            if current is not None:
                commits.append(current)
            continue
        if current is None:
            issues.append(ParseIssue(filename, lineno, "numstat line before any commit header"))
            continue
        _parse_numstat_line(line, lineno, filename, current, issues)

    return commits, issues


def _parse_header(line: str, lineno: int, filename: str, issues: list[ParseIssue]) -> CommitRecord | None:
    parts = line[len(HEADER_PREFIX):].split("|", 3)
    if len(parts) != 4:
        issues.append(ParseIssue(filename, lineno, f"malformed commit header: {line[:80]!r}"))
        return None
    sha, author, date_str, subject = parts
    try:
        ts, offset = parse_instant(date_str)
    except ValueError:
        issues.append(ParseIssue(filename, lineno, f"unparseable commit date: {date_str!r}"))
        return None
    return CommitRecord(
        author_alias=author,
        timestamp=ts,
        lines_added=0,
        lines_deleted=0,
        files=[],
        message=subject,
        sha=sha,
        offset_min=offset,
    )


def _parse_numstat_line(
    line: str, lineno: int, filename: str, commit: CommitRecord, issues: list[ParseIssue]
) -> None:
    fields = line.split("\t")
    if len(fields) < 3:
        fields = line.split(None, 2)
    if len(fields) < 3:
        issues.append(ParseIssue(filename, lineno, f"malformed numstat line: {line[:80]!r}"))
        return
    adds_s, dels_s, path = fields[0].strip(), fields[1].strip(), fields[2].strip()
    try:
        adds = 0 if adds_s == "-" else int(adds_s)
        dels = 0 if dels_s == "-" else int(dels_s)
    except ValueError:
        issues.append(ParseIssue(filename, lineno, f"non-numeric numstat counts: {line[:80]!r}"))
        return
    commit.lines_added += adds
    commit.lines_deleted += dels
    commit.files.append(path)

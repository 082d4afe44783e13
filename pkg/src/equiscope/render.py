"""Human-readable rendering of a run report (text or markdown)."""

from __future__ import annotations

from typing import Any

from .measures import BENCHMARKS, DIMENSIONS


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def _table(headers: list[str], rows: list[list[str]], markdown: bool) -> list[str]:
    if markdown:
        lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return lines
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    fmt_row = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths))
    return [fmt_row(headers), fmt_row(["-" * w for w in widths])] + [fmt_row(r) for r in rows]


def render_report(report: dict[str, Any], fmt: str = "text") -> str:
    markdown = fmt == "markdown"
    h = report["header"]
    out: list[str] = []

    def title(text: str, level: int = 2) -> None:
        if markdown:
            out.append("#" * level + " " + text)
        else:
            out.append(text)
            out.append("=" * len(text) if level == 1 else "-" * len(text))
        out.append("")

    title(f"Contribution analysis: {h['project_id']}", 1)
    out.append(f"Window: {h['window']['start']} .. {h['window']['end']}")
    out.append(f"Roster: {', '.join(s['id'] for s in h['roster'])}")
    out.append(f"Provider: {h['provider_id']}")
    for note in h.get("notes", []):
        out.append(f"Note: {note}")
    out.append("")

    students = [s["id"] for s in h["roster"]]
    base = report["base_measures"]["values"]
    title("Base measures (team mean = 1.0)")
    rows = [[s] + [_fmt(base[s][b]) for b in BENCHMARKS] for s in students]
    out += _table(["student"] + list(BENCHMARKS), rows, markdown)
    neutral = report["base_measures"].get("neutral_benchmarks", [])
    if neutral:
        out.append("")
        out.append(f"Neutral (no usable evidence): {', '.join(neutral)}")
    out.append("")

    objective = report["objective_measures"]
    adjusted = report["adjusted"]["objective_measures"]
    title("Objective measures")
    rows = [
        [s] + [_fmt(objective[s][d]) for d in DIMENSIONS] + [_fmt(adjusted[s][d]) for d in DIMENSIONS]
        for s in students
    ]
    out += _table(["student"] + [f"{d}" for d in DIMENSIONS] + [f"{d} (adj)" for d in DIMENSIONS], rows, markdown)
    out.append("")

    title("Conflict markers")
    markers = report["conflict_markers"]
    if markers:
        rows = [
            [m["benchmark"], m["scenario"], m["student"], _fmt(m["gini"]), f"{m['deviation_sd']:+.2f}",
             m["implication_text"]]
            for m in markers
        ]
        out += _table(["benchmark", "scenario", "student", "gini", "dev (SD)", "implication"], rows, markdown)
    else:
        out.append("No conflict markers fired.")
    out.append("")

    judgment = report["advisory"]["judgment"]
    title("Advisory judgment")
    out.append(f"Status: {judgment['status']}; confidence: {judgment['confidence']}")
    if judgment.get("reason"):
        out.append(f"Reason: {judgment['reason']}")
    out.append("")
    for student, narrative in judgment.get("per_student_narrative", {}).items():
        out.append(f"- {student}: {narrative}" if markdown else f"  {student}: {narrative}")
    if judgment.get("suggested_investigation_steps"):
        out.append("")
        out.append("Suggested investigation steps:")
        for step in judgment["suggested_investigation_steps"]:
            out.append(f"- {step}" if markdown else f"  * {step}")
    removed = [e for e in judgment.get("validation_log", []) if e["status"] == "removed"]
    if removed:
        out.append("")
        out.append(f"Validation removed {len(removed)} unsupported claim(s); see validation_log in the JSON report.")
    out.append("")
    out.append(judgment.get("disclaimer", ""))
    out.append("")
    return "\n".join(out)

"""Produces the dashboard test fixtures: service-shaped report responses for the
demo bundle under three configurations (baseline, raised Gini threshold, zeroed
Quality weight in the Contribution mask)."""

from __future__ import annotations

import json
from pathlib import Path

from equiscope.measures import WeightConfig
from equiscope.pipeline import analyze_path, report_json

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"
BUNDLE = ROOT / "tests" / "fixtures" / "demo_bundle"


def response(run_id: str, config: WeightConfig, based_on: str | None = None) -> dict:
    report, _ = analyze_path(BUNDLE, config)
    body = json.loads(report_json(report))
    envelope = {
        "run_id": run_id,
        "project_id": body["header"]["project_id"],
        "bundle_version": "f" * 64,
        "based_on": based_on,
        "config": body["config"],
        "status": "complete",
        "created": "2026-02-01T10:00:00+00:00",
        "started": "2026-02-01T10:00:01+00:00",
        "completed": "2026-02-01T10:00:04+00:00",
        "report_path": "report.json",
        "transcript_path": "transcripts.jsonl",
        "annotations": [],
    }
    return {"envelope": envelope, "body": body}


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    baseline = response("r00000001", WeightConfig())
    (FIXTURES / "baseline.json").write_text(json.dumps(baseline, indent=1, sort_keys=True))

    threshold = response("r00000002", WeightConfig.from_dict({"gini_threshold": 0.35}), "r00000001")
    (FIXTURES / "whatif_threshold.json").write_text(json.dumps(threshold, indent=1, sort_keys=True))

    masked = response(
        "r00000003",
        WeightConfig.from_dict({
            "dimension_masks": {"Contribution": {"Quantity": 0.5, "Quality": 0.0, "Relevance": 0.5}}
        }),
        "r00000001",
    )
    (FIXTURES / "whatif_mask.json").write_text(json.dumps(masked, indent=1, sort_keys=True))

    base_markers = {(m["benchmark"], m["scenario"], m["student"]) for m in baseline["body"]["conflict_markers"]}
    thr_markers = {(m["benchmark"], m["scenario"], m["student"]) for m in threshold["body"]["conflict_markers"]}
    print("baseline markers:", sorted(base_markers))
    print("removed by threshold change:", sorted(base_markers - thr_markers))
    assert base_markers - thr_markers == {("Quality", "A", "alice")}
    assert thr_markers <= base_markers
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()

import json

import jsonschema
import pytest

from equiscope.advisor import (
    DISCLAIMER,
    Claim,
    RunIndex,
    build_local_prompt,
    global_judgment,
    local_summaries,
    referential_check,
    run_advisory,
    validate_judgment,
)
from equiscope.advisor.judgment import GLOBAL_SCHEMA, RawJudgment
from equiscope.conflict import ConflictMarker, detect_markers
from equiscope.measures import (
    BENCHMARKS,
    BaseMeasures,
    ObjectiveMeasures,
    WeightConfig,
)
from equiscope.metrics.table import MetricTable
from equiscope.provider.mock import MockProvider


ROSTER = ["alice", "bob", "carol"]


def _base(quantity=None):
    values = {
        s: {b: 1.0 for b in BENCHMARKS} for s in ROSTER
    }
    if quantity:
        for s, v in quantity.items():
            values[s]["Quantity"] = v
    return BaseMeasures(values=values, used_metrics={b: ["1a"] for b in BENCHMARKS}, neutral_benchmarks=[])


def _objective():
    return ObjectiveMeasures(values={s: {"Contribution": 1.0, "Interaction": 1.0, "Role": 1.0} for s in ROSTER})


def _table():
    table = MetricTable(roster=ROSTER)
    table.set_column("1a", {"alice": 3.0, "bob": 2.0, "carol": 1.0}, {s: 2 for s in ROSTER})
    return table


def _markers(base=None):
    markers, _ = detect_markers(base or _base({"alice": 0.0, "bob": 1.5, "carol": 1.5}), WeightConfig())
    return markers


def test_local_prompt_is_deterministic():
    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    markers = _markers(base)
    r1 = build_local_prompt("Contribution", base, markers, [])
    r2 = build_local_prompt("Contribution", base, markers, [])
    assert r1.to_dict() == r2.to_dict()
    assert r1.temperature == 0.0


def test_local_prompt_states_when_no_markers_fired():
    request = build_local_prompt("Interaction", _base(), [], [])
    user_text = request.segments[1][1]
    assert "No markers fired for this dimension." in user_text


def test_local_prompt_includes_implication_text():
    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    request = build_local_prompt("Contribution", base, _markers(base), [])
    assert "Social loafing" in request.segments[1][1]


def test_local_summaries_cover_three_dimensions_with_stubs_on_outage():
    base = _base()
    down = MockProvider(fail_ops=["local_summary"])
    summaries = local_summaries(base, [], [], down)
    assert set(summaries) == {"Contribution", "Interaction", "Role"}
    assert all(not s.available for s in summaries.values())
    assert "unavailable" in summaries["Contribution"].narrative


def test_mock_judgment_enumerates_markers():
    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    markers = _markers(base)
    mock = MockProvider()
    summaries = local_summaries(base, markers, [], mock)
    raw = global_judgment(summaries, _objective(), markers, {}, [], mock)
    refs = {c.datum_ref for c in raw.claims}
    assert "marker:Quantity:B:alice" in refs
    assert raw.confidence == "medium"


def test_schema_bans_extra_fields_like_grades():
    payload = {
        "claims": [],
        "suggested_investigation_steps": [],
        "confidence": "low",
        "grade": 72,
    }
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(payload, GLOBAL_SCHEMA)


def _index(base=None, markers=None):
    return RunIndex.build(ROSTER, _table(), base or _base(), _objective(), markers or [])


def test_referential_check_accepts_valid_marker_claim():
    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    markers = _markers(base)
    index = _index(base, markers)
    claim = Claim("alice", "outlier_Quantity_B", "marker:Quantity:B:alice", markers[0].gini)
    ok, datum = referential_check(claim, index)
    assert ok and datum == "marker:Quantity:B:alice"


def test_referential_check_rejects_unknown_student():
    claim = Claim("mallory", "outlier_Quantity_B", "marker:Quantity:B:mallory", 0.9)
    ok, reason = referential_check(claim, _index())
    assert not ok and "roster" in reason


def test_referential_check_rejects_unfired_marker():
    claim = Claim("alice", "outlier_Tone_A", "marker:Tone:A:alice", None)
    ok, reason = referential_check(claim, _index())
    assert not ok and "did not fire" in reason


def test_referential_check_rejects_numeric_mismatch():
    claim = Claim("alice", "metric_reading", "metric:1a:alice", 9.0)
    ok, reason = referential_check(claim, _index())
    assert not ok and "does not match" in reason


def test_referential_check_rejects_subject_datum_mismatch():
    claim = Claim("alice", "metric_reading", "metric:1a:bob", None)
    ok, reason = referential_check(claim, _index())
    assert not ok and "not the claim subject" in reason


def test_adversarial_claim_removed_and_logged():
    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    markers = _markers(base)
    evil = MockProvider(adversarial=True)
    summaries = local_summaries(base, markers, [], evil)
    raw = global_judgment(summaries, _objective(), markers, {}, [], evil)
    assert any(c.subject == "nobody-x" for c in raw.claims)
    judgment = validate_judgment(raw, _index(base, markers), markers, ROSTER, evil)
    assert judgment.status == "ok"
    assert all(c.subject != "nobody-x" for c in judgment.claims)
    removed = [e for e in judgment.validation_log if e["status"] == "removed"]
    assert any(e["claim"]["subject"] == "nobody-x" for e in removed)
    assert "nobody-x" not in " ".join(judgment.per_student_narrative.values())


def test_validator_outage_withholds_judgment():
    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    markers = _markers(base)
    flaky = MockProvider(fail_ops=["validate"])
    summaries = local_summaries(base, markers, [], flaky)
    raw = global_judgment(summaries, _objective(), markers, {}, [], flaky)
    judgment = validate_judgment(raw, _index(base, markers), markers, ROSTER, flaky)
    assert judgment.status == "withheld"
    assert judgment.claims == []
    assert judgment.per_student_narrative == {}


def test_missing_raw_judgment_is_unavailable():
    judgment = validate_judgment(None, _index(), [], ROSTER, MockProvider())
    assert judgment.status == "unavailable"


def test_supported_claims_survive_unchanged():
    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    markers = _markers(base)
    mock = MockProvider()
    raw = RawJudgment(
        claims=[Claim("alice", "outlier_Quantity_B", "marker:Quantity:B:alice", markers[0].gini)],
        suggested_investigation_steps=["check the commit history"],
        confidence="medium",
    )
    judgment = validate_judgment(raw, _index(base, markers), markers, ROSTER, mock)
    assert judgment.status == "ok"
    assert len(judgment.claims) == 1
    assert all(e["status"] == "supported" for e in judgment.validation_log)
    assert judgment.disclaimer == DISCLAIMER


def test_no_markers_judgment_states_even_spread():
    mock = MockProvider()
    summaries = local_summaries(_base(), [], [], mock)
    raw = global_judgment(summaries, _objective(), [], {}, [], mock)
    judgment = validate_judgment(raw, _index(), [], ROSTER, mock)
    assert judgment.status == "ok"
    joined = " ".join(judgment.per_student_narrative.values()) + " ".join(judgment.suggested_investigation_steps)
    assert "No inequality signals" in joined


def test_full_advisory_pass_and_advisory_stance():
    import re

    base = _base({"alice": 0.0, "bob": 1.5, "carol": 1.5})
    markers = _markers(base)
    summaries, judgment = run_advisory(
        ROSTER, _table(), base, _objective(), markers, [], {}, [], MockProvider()
    )
    assert judgment.status == "ok"
    text = json.dumps(judgment.to_dict())
    assert "grade" not in text.lower().replace("grading decisions", "").replace("grades", "")
    for narrative in judgment.per_student_narrative.values():
        assert not re.search(r"\bgrade\b\s*[:=]?\s*\d", narrative, re.IGNORECASE)


def test_local_prompt_matches_golden_expansion():
    from pathlib import Path

    from equiscope.measures import BENCHMARKS, WeightConfig

    values = {s: {b: 1.0 for b in BENCHMARKS} for s in ("ana", "ben", "cyn")}
    values["ana"]["Quantity"] = 0.0
    values["ben"]["Quantity"] = 1.5
    values["cyn"]["Quantity"] = 1.5
    base = BaseMeasures(values=values, used_metrics={b: ["1a", "1b"] for b in BENCHMARKS},
                        neutral_benchmarks=["Tone"])
    markers, _ = detect_markers(base, WeightConfig())
    request = build_local_prompt("Contribution", base, markers, ["Tone"])
    golden = json.loads((Path(__file__).parent / "golden" / "local_prompt.json").read_text())
    assert request.to_dict() == golden

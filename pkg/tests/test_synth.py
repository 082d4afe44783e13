import json
from pathlib import Path

import pytest

from equiscope.evidence import load_bundle
from equiscope.measures import WeightConfig
from equiscope.metrics.sentiment import LexiconAnalyzer
from equiscope.pipeline import analyze_path
from equiscope.synth import (
    COMMIT_TEMPLATES,
    OPENER_TEMPLATES,
    REPLY_TEXT,
    Archetype,
    BehaviourProfile,
    generate,
    load_profiles,
    standard_team,
)


def _dir_bytes(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_generated_bundle_passes_validation(tmp_path):
    out = generate(standard_team(Archetype.BALANCED), 5, tmp_path / "b")
    result = load_bundle(out)
    assert result.ok, result.issues
    assert result.bundle.unresolved_aliases == []
    assert len(result.bundle.roster) == 3
    assert result.bundle.commits and result.bundle.chat_messages and result.bundle.meetings


def test_same_seed_produces_identical_bytes(tmp_path):
    a = generate(standard_team(Archetype.LOAFER), 9, tmp_path / "a")
    b = generate(standard_team(Archetype.LOAFER), 9, tmp_path / "b")
    assert _dir_bytes(a) == _dir_bytes(b)


def test_different_seeds_differ(tmp_path):
    a = generate(standard_team(Archetype.BALANCED), 1, tmp_path / "a")
    b = generate(standard_team(Archetype.BALANCED), 2, tmp_path / "b")
    assert _dir_bytes(a) != _dir_bytes(b)


def test_all_balanced_team_labels_empty(tmp_path):
    out = generate(standard_team(Archetype.BALANCED), 3, tmp_path / "b")
    labels = json.loads((out / "labels.json").read_text())
    assert labels["labels"] == []


def test_loafer_labels_include_quantity_b(tmp_path):
    out = generate(standard_team(Archetype.LOAFER), 3, tmp_path / "b")
    labels = json.loads((out / "labels.json").read_text())["labels"]
    assert {"benchmark": "Quantity", "scenario": "B", "student": "s1"} in labels


def test_low_intensity_profiles_carry_no_label_guarantee(tmp_path):
    out = generate(standard_team(Archetype.LOAFER, intensity=0.3), 3, tmp_path / "b")
    labels = json.loads((out / "labels.json").read_text())["labels"]
    assert labels == []


@pytest.mark.parametrize("archetype,expected", [
    (Archetype.LOAFER, [("Quality", "B", "s1"), ("Quantity", "B", "s1")]),
    (Archetype.HOG, [("Quantity", "A", "s1")]),
    (Archetype.GHOST, [("Presence", "B", "s1")]),
    (Archetype.POOR_COMMUNICATOR, [("Effectiveness", "B", "s1")]),
    (Archetype.LATE_STARTER, [("Adherence", "B", "s1")]),
    (Archetype.CLIQUE_MEMBER, []),
])
def test_archetype_detection_matches_labels(tmp_path, archetype, expected):
    out = generate(standard_team(archetype), 11, tmp_path / "b")
    report, result = analyze_path(out, WeightConfig())
    assert not result.issues
    fired = sorted((m["benchmark"], m["scenario"], m["student"]) for m in report["conflict_markers"])
    assert fired == sorted(expected)
    labelled = json.loads((out / "labels.json").read_text())["labels"]
    assert fired == sorted((l["benchmark"], l["scenario"], l["student"]) for l in labelled)


def test_clique_member_suppresses_interaction_diversity(tmp_path):
    out = generate(standard_team(Archetype.CLIQUE_MEMBER), 4, tmp_path / "b")
    report, _ = analyze_path(out, WeightConfig())
    diversity = report["metrics"]["2h"]
    assert diversity["s1"]["value"] == pytest.approx(0.0)
    assert diversity["s2"]["value"] > 0.5


def test_generated_texts_are_sentiment_neutral():
    analyzer = LexiconAnalyzer()
    for text in OPENER_TEMPLATES + COMMIT_TEMPLATES + (REPLY_TEXT,):
        assert analyzer.score_message(text) == 0.0, text


def test_load_profiles_file(tmp_path):
    path = tmp_path / "profiles.json"
    path.write_text(json.dumps([
        {"student": "x", "archetype": "hog", "intensity": 0.9},
        {"student": "y"},
    ]))
    profiles = load_profiles(path)
    assert profiles[0] == BehaviourProfile("x", Archetype.HOG, 0.9)
    assert profiles[1].archetype is Archetype.BALANCED


def test_rejects_single_profile(tmp_path):
    with pytest.raises(ValueError, match="at least 2"):
        generate([BehaviourProfile("solo")], 1, tmp_path / "b")

import pytest

from equiscope.contextadjust import (
    absence_fraction,
    adjustment_factors,
    apply_adjustment,
    classify_pa,
    inject_pa_masks,
    load_pa_label_map,
    pa_metric_columns,
)
from equiscope.evidence import load_bundle
from equiscope.evidence.types import PeerAssessmentItem
from equiscope.measures import BaseMeasures, ObjectiveMeasures, WeightConfig, BENCHMARKS
from equiscope.metrics.table import MetricTable


def _bundle(bundle_builder, **kwargs):
    return load_bundle(bundle_builder(**kwargs).write()).bundle


def test_no_records_means_zero_absence(bundle_builder):
    bundle = _bundle(bundle_builder)
    assert absence_fraction([], bundle) == {"alice": 0.0, "bob": 0.0, "carol": 0.0}


def test_full_window_absence_is_one(bundle_builder):
    b = bundle_builder()
    b.add_absence("alice", "2026-01-05T00:00:00+00:00", "2026-01-19T00:00:00+00:00")
    bundle = load_bundle(b.write()).bundle
    assert absence_fraction(bundle.context_records, bundle)["alice"] == pytest.approx(1.0)


def test_overlapping_absences_use_interval_union(bundle_builder):
    # [Jan 6, Jan 9) and [Jan 8, Jan 9 12:00): union 84 h of 336 h = 0.25
    b = bundle_builder()
    b.add_absence("carol", "2026-01-06T00:00:00+00:00", "2026-01-09T00:00:00+00:00")
    b.add_absence("carol", "2026-01-08T00:00:00+00:00", "2026-01-09T12:00:00+00:00")
    bundle = load_bundle(b.write()).bundle
    assert absence_fraction(bundle.context_records, bundle)["carol"] == pytest.approx(0.25)


def test_absence_clipped_to_window(bundle_builder):
    b = bundle_builder()
    b.add_absence("bob", "2025-12-30T00:00:00+00:00", "2026-01-06T00:00:00+00:00")  # 24 h inside
    bundle = load_bundle(b.write()).bundle
    assert absence_fraction(bundle.context_records, bundle)["bob"] == pytest.approx(24 / 336)


def test_factors_neutral_without_context(bundle_builder):
    bundle = _bundle(bundle_builder)
    factors = adjustment_factors(bundle, WeightConfig())
    for f in factors.values():
        assert f.factor == 1.0
        assert f.per_dimension == {"Contribution": 1.0, "Interaction": 1.0, "Role": 1.0}


def test_half_absence_presence_scaling_hits_the_clamp(bundle_builder):
    b = bundle_builder()
    b.add_absence("alice", "2026-01-05T00:00:00+00:00", "2026-01-12T00:00:00+00:00")  # 50%
    bundle = load_bundle(b.write()).bundle
    factors = adjustment_factors(bundle, WeightConfig())
    # compensation 1/(1-0.5)-1 = 1.0, w_a 0.5 -> raw 1.5, clamped to 1 + 0.15
    assert factors["alice"].per_dimension["Interaction"] == pytest.approx(1.15)
    assert factors["alice"].per_dimension["Contribution"] == pytest.approx(1.0)
    assert factors["alice"].factor == pytest.approx(1.15)


def test_past_grades_shift_all_dimensions_within_band(bundle_builder):
    b = bundle_builder()
    b.add_past_grade("alice", 80)
    b.add_past_grade("bob", 60)
    bundle = load_bundle(b.write()).bundle
    factors = adjustment_factors(bundle, WeightConfig())
    # team mean 70: alice ratio 8/7, bob 6/7; w_g 0.5
    assert factors["alice"].past_grade_ratio == pytest.approx(8 / 7)
    expected_alice = 1.0 + 0.5 * (8 / 7 - 1.0)
    assert factors["alice"].per_dimension["Role"] == pytest.approx(expected_alice)
    assert factors["bob"].per_dimension["Role"] == pytest.approx(1.0 + 0.5 * (6 / 7 - 1.0))
    assert factors["carol"].per_dimension["Role"] == pytest.approx(1.0)
    for f in factors.values():
        for v in f.per_dimension.values():
            assert 0.85 - 1e-12 <= v <= 1.15 + 1e-12


def test_apply_adjustment_scales_by_parent_dimension(bundle_builder):
    b = bundle_builder()
    b.add_absence("alice", "2026-01-05T00:00:00+00:00", "2026-01-12T00:00:00+00:00")
    bundle = load_bundle(b.write()).bundle
    factors = adjustment_factors(bundle, WeightConfig())
    base = BaseMeasures(
        values={s: {bm: 1.0 for bm in BENCHMARKS} for s in bundle.roster_ids},
        used_metrics={bm: [] for bm in BENCHMARKS},
        neutral_benchmarks=[],
    )
    objective = ObjectiveMeasures(values={s: {"Contribution": 1.0, "Interaction": 1.0, "Role": 1.0}
                                          for s in bundle.roster_ids})
    adj_base, adj_obj = apply_adjustment(base, objective, factors)
    assert adj_obj.values["alice"]["Interaction"] == pytest.approx(1.15)
    assert adj_obj.values["alice"]["Contribution"] == pytest.approx(1.0)
    assert adj_base.values["alice"]["Presence"] == pytest.approx(1.15)   # Interaction benchmark
    assert adj_base.values["alice"]["Quantity"] == pytest.approx(1.0)    # Contribution benchmark
    assert adj_base.values["bob"] == base.values["bob"]


def _pa(rater, ratee, label, score):
    return PeerAssessmentItem(rater_alias=rater, ratee_alias=ratee, category_label=label,
                              score=score, rater=rater, ratee=ratee)


def test_label_map_routes_tone_exactly():
    classification = classify_pa([_pa("a", "b", "tone", 4)])
    assert list(classification.corrected) == ["Tone"]
    assert classification.advisor_evidence == []


def test_bias_correction_documented_example():
    # rater r1 mean given 4.5 vs grand mean 4.0: raw 4.5 corrects to 4.0
    items = [
        _pa("r1", "x", "tone", 4), _pa("r1", "y", "tone", 5),      # r1 mean 4.5
        _pa("r2", "x", "tone", 4), _pa("r2", "y", "tone", 3),      # r2 mean 3.5
    ]
    classification = classify_pa(items)
    ratings = classification.corrected["Tone"]
    r1_y = next(r for r in ratings if r.rater == "r1" and r.ratee == "y")
    assert r1_y.raw == 5
    # grand mean 4.0 -> 5 * (4.0/4.5)
    assert r1_y.corrected == pytest.approx(5 * 4.0 / 4.5)
    grand_raw = sum(r.raw for r in ratings) / len(ratings)
    grand_corrected = sum(r.corrected for r in ratings) / len(ratings)
    assert grand_corrected == pytest.approx(grand_raw, abs=1e-9)


def test_exact_ratio_case():
    items = [
        _pa("r1", "x", "support", 5), _pa("r1", "y", "support", 4),   # mean 4.5
        _pa("r2", "x", "support", 4), _pa("r2", "y", "support", 3),   # mean 3.5
    ]
    ratings = classify_pa(items).corrected["Support"]
    # grand mean 4.0; a raw 4.5-mean rater giving 4.5... use r1's 5: 5*4/4.5 = 4.444
    r1_x = next(r for r in ratings if r.rater == "r1" and r.ratee == "x")
    assert r1_x.corrected == pytest.approx(5 * 4.0 / 4.5, abs=1e-12)


def test_unmatched_label_routes_to_advisor():
    classification = classify_pa([_pa("a", "b", "vibes", 2)])
    assert classification.corrected == {}
    assert len(classification.advisor_evidence) == 1
    assert classification.advisor_evidence[0]["reason"] == "unmatched-label"


def test_case_insensitive_label_match():
    classification = classify_pa([_pa("a", "b", "TONE", 4), _pa("a", "c", "Helpfulness", 5)])
    assert set(classification.corrected) == {"Tone", "Support"}


def test_pa_columns_and_mask_injection():
    classification = classify_pa([
        _pa("a", "b", "tone", 4), _pa("b", "a", "tone", 2), _pa("c", "a", "tone", 4),
    ])
    table = MetricTable(roster=["a", "b", "c"])
    added = pa_metric_columns(classification, table)
    assert added == ["pa_tone"]
    assert table.support("pa_tone", "a") == 2
    assert table.support("pa_tone", "c") == 0  # nobody rated c: neutral fill
    config = inject_pa_masks(WeightConfig(), added)
    tone_mask = config.benchmark_masks["Tone"]
    assert tone_mask["pa_tone"] == pytest.approx(0.25)
    assert tone_mask["2i"] == pytest.approx(0.75)
    assert sum(tone_mask.values()) == pytest.approx(1.0, abs=1e-9)
    config.validate()


def test_label_map_loads_and_covers_all_benchmarks():
    label_map = load_pa_label_map()
    assert set(label_map.values()) == set(BENCHMARKS)

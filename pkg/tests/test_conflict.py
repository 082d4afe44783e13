import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from equiscope.conflict import IMPLICATIONS, detect_markers, gini, inequality_stats
from equiscope.measures import BENCHMARKS, BaseMeasures, WeightConfig


def brute_force_gini(values):
    n = len(values)
    mu = sum(values) / n
    if mu == 0:
        return 0.0
    total = 0.0
    for a in values:
        for b in values:
            total += abs(a - b)
    return total / (2 * n * n * mu)


def test_perfect_equality():
    assert gini([1, 1, 1, 1]) == 0.0


def test_documented_values():
    assert gini([1, 2, 3, 4]) == pytest.approx(0.25, abs=1e-12)
    assert gini([0, 0, 10, 10]) == pytest.approx(0.5, abs=1e-12)
    assert gini([0, 10, 10, 10]) == pytest.approx(0.25, abs=1e-12)


def test_rejects_negative_values():
    with pytest.raises(ValueError, match="non-negative"):
        gini([-1, 2, 3])


def test_all_zero_returns_zero():
    assert gini([0.0, 0.0, 0.0]) == 0.0


def test_oracle_equivalence_1000_random_vectors():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(2, 8)
        values = [rng.uniform(0, 100) for _ in range(n)]
        assert gini(values) == pytest.approx(brute_force_gini(values), abs=1e-9)


@given(st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False), min_size=2, max_size=8),
       st.sampled_from([0.5, 2.0, 10.0]))
def test_scale_invariance(values, c):
    assert gini([v * c for v in values]) == pytest.approx(gini(values), abs=1e-9)


@given(st.lists(st.floats(min_value=0, max_value=100, allow_nan=False), min_size=2, max_size=8),
       st.floats(min_value=0.1, max_value=50))
def test_translation_shrinks(values, c):
    if sum(values) == 0:
        return
    assert gini([v + c for v in values]) <= gini(values) + 1e-12


def _base_with(benchmark_values: dict[str, dict[str, float]]) -> BaseMeasures:
    students = sorted({s for col in benchmark_values.values() for s in col}) or ["s1", "s2", "s3"]
    values = {
        s: {b: benchmark_values.get(b, {}).get(s, 1.0) for b in BENCHMARKS} for s in students
    }
    return BaseMeasures(values=values, used_metrics={b: ["1a"] for b in BENCHMARKS}, neutral_benchmarks=[])


def test_equal_benchmark_fires_nothing():
    base = _base_with({})
    markers, _ = detect_markers(base, WeightConfig())
    assert markers == []


def test_gini_quarter_vector_stays_below_default_threshold():
    base = _base_with({"Quantity": {"s1": 0.0, "s2": 10.0, "s3": 10.0, "s4": 10.0}})
    markers, stats = detect_markers(base, WeightConfig())
    assert stats["Quantity"].gini == pytest.approx(0.25)
    assert markers == []


def test_single_low_outlier_fires_scenario_b_with_implication():
    # [0, 1.5, 1.5]: gini 1/3 >= 0.3, deviation -sqrt(2)
    base = _base_with({"Quantity": {"s1": 0.0, "s2": 1.5, "s3": 1.5}})
    markers, stats = detect_markers(base, WeightConfig())
    assert stats["Quantity"].gini == pytest.approx(1 / 3, abs=1e-12)
    assert len(markers) == 1
    marker = markers[0]
    assert (marker.benchmark, marker.scenario, marker.student) == ("Quantity", "B", "s1")
    assert marker.dimension == "Contribution"
    assert marker.deviation_sd == pytest.approx(-2 ** 0.5, abs=1e-9)
    assert marker.implication_text == "Social loafing. I.e., few members not carrying their weight."


def test_four_student_low_outlier_needs_lower_threshold():
    # [0, 4/3, 4/3, 4/3] has gini exactly 0.25, under the default 0.3 threshold;
    # at a 0.2 threshold the below-average student fires scenario B.
    column = {"s1": 0.0, "s2": 4 / 3, "s3": 4 / 3, "s4": 4 / 3}
    base = _base_with({"Quantity": column})
    markers, stats = detect_markers(base, WeightConfig())
    assert stats["Quantity"].gini == pytest.approx(0.25, abs=1e-12)
    assert markers == []

    config = WeightConfig.from_dict({"gini_threshold": 0.2})
    markers, _ = detect_markers(base, config)
    assert [(m.benchmark, m.scenario, m.student) for m in markers] == [("Quantity", "B", "s1")]
    assert markers[0].implication_text.startswith("Social loafing")


def test_high_outlier_fires_scenario_a():
    base = _base_with({"Support": {"s1": 2.4545, "s2": 0.2727, "s3": 0.2728}})
    markers, _ = detect_markers(base, WeightConfig())
    assert [(m.benchmark, m.scenario, m.student) for m in markers] == [("Support", "A", "s1")]
    assert markers[0].dimension == "Role"
    assert markers[0].implication_text == IMPLICATIONS[("Support", "A")]


def test_marker_soundness_recheckable_from_fields():
    base = _base_with({
        "Quantity": {"s1": 0.0, "s2": 1.5, "s3": 1.5},
        "Presence": {"s1": 2.2, "s2": 0.4, "s3": 0.4},
    })
    config = WeightConfig()
    markers, stats = detect_markers(base, config)
    assert markers
    for m in markers:
        assert m.gini >= config.gini_threshold
        if m.scenario == "A":
            assert m.deviation_sd >= config.deviation_threshold
        else:
            assert m.deviation_sd <= -config.deviation_threshold
    # at most one scenario per (benchmark, student)
    keys = [(m.benchmark, m.student) for m in markers]
    assert len(keys) == len(set(keys))


def test_markers_sorted_by_dimension_benchmark_scenario_student():
    base = _base_with({
        "Support": {"s1": 0.0, "s2": 1.5, "s3": 1.5},
        "Quantity": {"s1": 0.0, "s2": 1.5, "s3": 1.5},
    })
    markers, _ = detect_markers(base, WeightConfig())
    ordered = [(m.dimension, m.benchmark, m.scenario, m.student) for m in markers]
    assert ordered == sorted(ordered)


def test_negative_values_shifted_defensively():
    base = _base_with({"Tone": {"s1": -0.2, "s2": 1.6, "s3": 1.6}})
    stats = inequality_stats(base)
    assert stats["Tone"].shifted is True
    assert 0.0 <= stats["Tone"].gini < 1.0


def test_implication_registry_covers_all_benchmark_scenarios():
    assert set(IMPLICATIONS) == {(b, s) for b in BENCHMARKS for s in ("A", "B")}

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equiscope.errors import ConfigError
from equiscope.measures import (
    BENCHMARKS,
    NormalizedMetrics,
    WeightConfig,
    aggregate_base,
    aggregate_objective,
    autorate,
    final_grade_projection,
    normalize_metrics,
    project_grades,
    ObjectiveMeasures,
)
from equiscope.metricdefs import Orientation
from equiscope.metrics.table import MetricTable

teams = st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False), min_size=2, max_size=8)


def as_map(values):
    return {f"s{i}": v for i, v in enumerate(values)}


def test_identity_case():
    assert autorate(as_map([80, 80, 80])) == {"s0": 1.0, "s1": 1.0, "s2": 1.0}


def test_documented_example():
    rated = autorate(as_map([90, 75, 60]))
    assert rated["s0"] == pytest.approx(1.2, abs=1e-9)
    assert rated["s1"] == pytest.approx(1.0, abs=1e-9)
    assert rated["s2"] == pytest.approx(0.8, abs=1e-9)


def test_all_zero_is_neutral():
    assert autorate(as_map([0, 0, 0, 0])) == {f"s{i}": 1.0 for i in range(4)}


def test_lower_better_inversion_reverses_order():
    rated = autorate(as_map([10.0, 20.0, 30.0]), Orientation.LOWER)
    # x' = (max+min) - x = [30, 20, 10] -> / mean 20
    assert rated["s0"] == pytest.approx(1.5)
    assert rated["s1"] == pytest.approx(1.0)
    assert rated["s2"] == pytest.approx(0.5)


@given(teams)
def test_mean_one_invariant(values):
    rated = autorate(as_map(values))
    assert sum(rated.values()) / len(rated) == pytest.approx(1.0, abs=1e-9)


@given(teams, st.sampled_from([0.5, 2.0, 10.0]))
def test_scale_invariance(values, c):
    base = autorate(as_map(values))
    scaled = autorate(as_map([v * c for v in values]))
    for k in base:
        assert scaled[k] == pytest.approx(base[k], abs=1e-9)


@given(st.lists(st.floats(min_value=0.01, max_value=1e3, allow_nan=False), min_size=3, max_size=6))
def test_monotonicity(values):
    base = autorate(as_map(values))
    bumped = list(values)
    bumped[0] = bumped[0] * 1.5 + 1.0
    after = autorate(as_map(bumped))
    assert after["s0"] > base["s0"]
    for i in range(1, len(values)):
        assert after[f"s{i}"] <= base[f"s{i}"] + 1e-12


def test_grade_projection_examples():
    assert final_grade_projection(90, 75, 60) == 72.0
    assert final_grade_projection(75, 75, 60) == 60.0
    assert final_grade_projection(90, 75, 60, "sqrt") == pytest.approx(65.7267, abs=1e-4)
    assert final_grade_projection(50, 0, 60) == 60.0


def test_constant_sum_conserves_total():
    objective = ObjectiveMeasures(values={
        "a": {"Contribution": 1.4, "Interaction": 1.1, "Role": 0.9},
        "b": {"Contribution": 0.8, "Interaction": 1.0, "Role": 1.2},
        "c": {"Contribution": 0.8, "Interaction": 0.9, "Role": 0.9},
    })
    grades = project_grades(objective, 64.0, "constant-sum")
    assert sum(grades.values()) == pytest.approx(3 * 64.0, abs=1e-6)


def test_mask_sum_validation_names_path():
    config = WeightConfig()
    config.benchmark_masks["Quantity"] = {"1a": 0.5, "1b": 0.4}
    with pytest.raises(ConfigError) as err:
        config.validate()
    assert "benchmark_masks.Quantity" in str(err.value)


def test_unknown_metric_rejected_with_path():
    config = WeightConfig()
    config.benchmark_masks["Tone"] = {"bogus": 1.0}
    with pytest.raises(ConfigError) as err:
        config.validate()
    assert "benchmark_masks.Tone.bogus" in str(err.value)


def test_negative_weight_rejected():
    config = WeightConfig()
    config.dimension_masks["Role"] = {"Adherence": 1.5, "Organisation": -0.5}
    with pytest.raises(ConfigError, match="negative"):
        config.validate()


def test_default_config_passes_validation():
    WeightConfig().validate()


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{"gini_threshold": 0.4, "benchmark_masks": {"Tone": {"2i": 0.5, "2g": 0.5}}}')
    config = WeightConfig.from_file(path)
    assert config.gini_threshold == 0.4
    assert config.benchmark_masks["Tone"] == {"2i": 0.5, "2g": 0.5}
    assert config.benchmark_masks["Quantity"] == WeightConfig().benchmark_masks["Quantity"]


def test_unknown_config_key_rejected():
    with pytest.raises(ConfigError, match="unknown configuration keys"):
        WeightConfig.from_dict({"gini": 0.4})


def _uniform_normalized(roster, metric_ids, value=1.0):
    return NormalizedMetrics(values={m: {s: value for s in roster} for m in metric_ids})


def test_aggregate_symmetric_mask():
    normalized = NormalizedMetrics(values={
        "1a": {"a": 1.2, "b": 0.8},
        "1b": {"a": 0.8, "b": 1.2},
    })
    config = WeightConfig()
    config.benchmark_masks["Quantity"] = {"1a": 0.5, "1b": 0.5}
    base = aggregate_base(normalized, config, ["a", "b"])
    assert base.values["a"]["Quantity"] == pytest.approx(1.0)
    assert base.values["b"]["Quantity"] == pytest.approx(1.0)


def test_aggregate_all_ones_gives_all_ones():
    roster = ["a", "b", "c"]
    all_metrics = {m for mask in WeightConfig().benchmark_masks.values() for m in mask}
    base = aggregate_base(_uniform_normalized(roster, all_metrics), WeightConfig(), roster)
    for s in roster:
        for b in BENCHMARKS:
            assert base.values[s][b] == pytest.approx(1.0)
    objective = aggregate_objective(base, WeightConfig())
    for s in roster:
        for d in ("Contribution", "Interaction", "Role"):
            assert objective.values[s][d] == pytest.approx(1.0)


def test_missing_metrics_renormalise_and_neutral_flagged():
    roster = ["a", "b"]
    normalized = NormalizedMetrics(values={"1h": {"a": 1.5, "b": 0.5}}, unavailable=["1g", "quality_grade"])
    base = aggregate_base(normalized, WeightConfig(), roster)
    # Quality falls back to the only available metric with weight renormalised to 1
    assert base.values["a"]["Quality"] == pytest.approx(1.5)
    assert "Quality" not in base.neutral_benchmarks
    # benchmarks with nothing available stay neutral at 1.0 and are flagged
    assert base.values["a"]["Quantity"] == 1.0
    assert "Quantity" in base.neutral_benchmarks


def test_dimension_projection_mask():
    roster = ["a", "b"]
    normalized = NormalizedMetrics(values={"2i": {"a": 1.3, "b": 0.7}})
    config = WeightConfig()
    config.dimension_masks["Interaction"] = {"Tone": 1.0}
    base = aggregate_base(normalized, config, roster)
    objective = aggregate_objective(base, config)
    assert objective.values["a"]["Interaction"] == pytest.approx(base.values["a"]["Tone"])


def test_fixture_masks_against_spreadsheet_oracle():
    # hand-weighted sums over a small fixture, computed independently below
    normalized = NormalizedMetrics(values={
        "1a": {"a": 1.50, "b": 0.50},
        "1b": {"a": 1.20, "b": 0.80},
        "1c": {"a": 0.90, "b": 1.10},
        "1d": {"a": 1.00, "b": 1.00},
        "1i": {"a": 0.40, "b": 1.60},
    })
    config = WeightConfig()
    base = aggregate_base(normalized, config, ["a", "b"])
    expected_a = (1.50 + 1.20 + 0.90 + 1.00 + 0.40) * 0.2
    assert base.values["a"]["Quantity"] == pytest.approx(expected_a, abs=1e-12)
    assert base.values["b"]["Quantity"] == pytest.approx(2.0 - expected_a, abs=1e-12)


def test_normalize_metrics_honours_fold_shift_and_zero_support():
    table = MetricTable(roster=["a", "b", "c"])
    table.set_column("1f", {"a": -0.5, "b": 0.5, "c": 0.0}, {"a": 3, "b": 3, "c": 3})
    table.set_column("2i", {"a": -1.0, "b": 1.0, "c": 0.0}, {"a": 2, "b": 2, "c": 2})
    table.set_column("2d", {"a": 0.0, "b": 30.0, "c": 10.0}, {"a": 0, "b": 4, "c": 2})
    normalized = normalize_metrics(table)
    # 1f folds to |x| and is lower-better: c (0.0) must rank best
    assert normalized.values["1f"]["c"] > normalized.values["1f"]["a"]
    assert normalized.values["1f"]["a"] == normalized.values["1f"]["b"]
    # 2i shifts to non-negative before rating: ordering preserved, all finite
    assert normalized.values["2i"]["b"] > normalized.values["2i"]["c"] > normalized.values["2i"]["a"]
    assert normalized.values["2i"]["a"] >= 0.0
    # 2d zero-support cell is filled with the supported team mean (20), not 0
    assert normalized.values["2d"]["b"] < normalized.values["2d"]["c"]
    assert normalized.values["2d"]["a"] == pytest.approx(
        autorate({"a": 20.0, "b": 30.0, "c": 10.0}, Orientation.LOWER)["a"]
    )


def test_normalize_skips_unavailable_columns():
    table = MetricTable(roster=["a", "b"])
    table.set_column("1a", {"a": 0.0, "b": 0.0}, {"a": 0, "b": 0})
    normalized = normalize_metrics(table)
    assert "1a" in normalized.unavailable
    assert "1a" not in normalized.values

import { describe, expect, it } from "vitest";

import { BENCHMARKS, DIMENSIONS, type ReportResponse } from "../src/types.js";
import { benchmarksOf, markerDrilldown, measuresView, radarPolygon } from "../src/views.js";
import baselineFixture from "./fixtures/baseline.json";

const baseline = (baselineFixture as unknown as ReportResponse).body;

describe("measuresView", () => {
  it("exposes every radar value verbatim from the report JSON", () => {
    const view = measuresView(baseline);
    expect(view.students).toEqual(baseline.header.roster.map((s) => s.id));
    for (const series of view.radar) {
      for (const axis of series.axes) {
        expect(axis.value).toBe(baseline.objective_measures[series.student]![axis.dimension]);
      }
    }
    for (const series of view.adjustedRadar) {
      for (const axis of series.axes) {
        expect(axis.value).toBe(baseline.adjusted.objective_measures[series.student]![axis.dimension]);
      }
    }
  });

  it("exposes every benchmark cell verbatim, adjusted and unadjusted", () => {
    const view = measuresView(baseline);
    for (const row of view.table) {
      for (const benchmark of BENCHMARKS) {
        expect(row.values[benchmark]).toBe(baseline.base_measures.values[row.student]![benchmark]);
        expect(row.adjustedValues[benchmark]).toBe(
          baseline.adjusted.base_measures.values[row.student]![benchmark],
        );
      }
    }
    expect(view.markerCount).toBe(baseline.conflict_markers.length);
  });

  it("adjusted and unadjusted series differ exactly where factors are not 1", () => {
    const view = measuresView(baseline);
    const factors = baseline.adjusted.factors;
    for (let i = 0; i < view.students.length; i++) {
      const student = view.students[i]!;
      for (let a = 0; a < DIMENSIONS.length; a++) {
        const dim = DIMENSIONS[a]!;
        const multiplier = factors[student]!.per_dimension[dim];
        const plain = view.radar[i]!.axes[a]!.value;
        const adjusted = view.adjustedRadar[i]!.axes[a]!.value;
        if (multiplier === 1.0) {
          expect(adjusted).toBe(plain);
        } else {
          expect(adjusted).not.toBe(plain);
        }
      }
    }
  });
});

describe("radarPolygon", () => {
  it("is a pure deterministic presentation mapping", () => {
    const view = measuresView(baseline);
    const first = radarPolygon(view.radar[0]!, 200);
    expect(radarPolygon(view.radar[0]!, 200)).toBe(first);
    expect(first.split(" ")).toHaveLength(3);
  });
});

describe("markerDrilldown", () => {
  it("surfaces gini, deviation, implication and the driving metric rows verbatim", () => {
    const marker = baseline.conflict_markers[0]!;
    const panel = markerDrilldown(baseline, marker);
    expect(panel.stat.gini).toBe(baseline.inequality[marker.benchmark].gini);
    expect(panel.marker.implication_text).toBe(marker.implication_text);
    expect(panel.benchmarkValue).toBe(baseline.base_measures.values[marker.student]![marker.benchmark]);
    expect(panel.metricRows.map((r) => r.metricId)).toEqual(
      baseline.base_measures.used_metrics[marker.benchmark],
    );
    for (const row of panel.metricRows) {
      expect(row.cell).toEqual(baseline.metrics[row.metricId]![marker.student]);
      expect(row.normalized).toBe(baseline.normalized.values[row.metricId]?.[marker.student] ?? null);
    }
    expect(panel.evidenceRefs).toEqual(marker.evidence_refs);
    expect(panel.teammates.map((t) => t.student)).not.toContain(marker.student);
  });

  it("maps benchmarks to their parent dimensions", () => {
    expect(benchmarksOf("Contribution")).toEqual(["Quantity", "Quality", "Relevance"]);
    expect(benchmarksOf("Role")).toEqual(["Adherence", "Organisation", "Support"]);
  });
});

/**
 * View models for the measures screen and the marker drill-down panel. Every
 * number in these structures is copied verbatim from the run report; rendering
 * code may scale coordinates for drawing but never derives new measure values.
 */

import {
  BENCHMARKS,
  BENCHMARK_DIMENSION,
  DIMENSIONS,
  type Benchmark,
  type ConflictMarker,
  type Dimension,
  type MetricCell,
  type RunReport,
} from "./types.js";

export interface RadarSeries {
  student: string;
  axes: { dimension: Dimension; value: number }[];
}

export interface BenchmarkRow {
  student: string;
  values: Record<Benchmark, number>;
  adjustedValues: Record<Benchmark, number>;
}

export interface MeasuresView {
  students: string[];
  radar: RadarSeries[];
  adjustedRadar: RadarSeries[];
  table: BenchmarkRow[];
  neutralBenchmarks: Benchmark[];
  markerCount: number;
}

export function measuresView(report: RunReport): MeasuresView {
  const students = report.header.roster.map((s) => s.id);
  const series = (values: RunReport["objective_measures"]): RadarSeries[] =>
    students.map((student) => ({
      student,
      axes: DIMENSIONS.map((dimension) => ({
        dimension,
        value: values[student]![dimension],
      })),
    }));
  return {
    students,
    radar: series(report.objective_measures),
    adjustedRadar: series(report.adjusted.objective_measures),
    table: students.map((student) => ({
      student,
      values: { ...report.base_measures.values[student]! },
      adjustedValues: { ...report.adjusted.base_measures.values[student]! },
    })),
    neutralBenchmarks: [...report.base_measures.neutral_benchmarks],
    markerCount: report.conflict_markers.length,
  };
}

/** Polygon points for an SVG radar chart; presentation-only scaling of raw values. */
export function radarPolygon(series: RadarSeries, size: number, maxValue = 2.0): string {
  const cx = size / 2;
  const cy = size / 2;
  const radius = size * 0.42;
  return series.axes
    .map((axis, i) => {
      const angle = -Math.PI / 2 + (2 * Math.PI * i) / series.axes.length;
      const r = radius * Math.min(1, Math.max(0, axis.value / maxValue));
      return `${(cx + r * Math.cos(angle)).toFixed(2)},${(cy + r * Math.sin(angle)).toFixed(2)}`;
    })
    .join(" ");
}

export interface MetricRow {
  metricId: string;
  cell: MetricCell;
  normalized: number | null;
}

export interface DrilldownPanel {
  marker: ConflictMarker;
  dimension: Dimension;
  stat: { gini: number; team_mean: number; team_sd: number };
  benchmarkValue: number;
  metricRows: MetricRow[];
  evidenceRefs: string[];
  teammates: { student: string; value: number }[];
}

/** Everything behind one marker: its inequality stats plus the metric rows that drive
 * the benchmark for the marked student, straight from the report. */
export function markerDrilldown(report: RunReport, marker: ConflictMarker): DrilldownPanel {
  const stat = report.inequality[marker.benchmark];
  const used = report.base_measures.used_metrics[marker.benchmark] ?? [];
  const metricRows: MetricRow[] = used.map((metricId) => ({
    metricId,
    cell: report.metrics[metricId]![marker.student]!,
    normalized: report.normalized.values[metricId]?.[marker.student] ?? null,
  }));
  return {
    marker,
    dimension: BENCHMARK_DIMENSION[marker.benchmark],
    stat: { gini: stat.gini, team_mean: stat.team_mean, team_sd: stat.team_sd },
    benchmarkValue: report.base_measures.values[marker.student]![marker.benchmark],
    metricRows,
    evidenceRefs: [...marker.evidence_refs],
    teammates: report.header.roster
      .map((s) => s.id)
      .filter((s) => s !== marker.student)
      .map((student) => ({ student, value: report.base_measures.values[student]![marker.benchmark] })),
  };
}

export function benchmarksOf(dimension: Dimension): Benchmark[] {
  return BENCHMARKS.filter((b) => BENCHMARK_DIMENSION[b] === dimension);
}

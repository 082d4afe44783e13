/**
 * Structural diff between a baseline report and a what-if report. Both inputs are
 * server-produced; the diff only compares fields, it never recomputes measures.
 * An empty diff (isEmptyDiff) means the what-if run reproduced the baseline exactly.
 */

import {
  BENCHMARKS,
  DIMENSIONS,
  type Benchmark,
  type ConflictMarker,
  type Dimension,
  type RunReport,
} from "./types.js";

export interface ValueChange {
  from: number;
  to: number;
}

export interface CompositionChange {
  removed: string[];
  added: string[];
}

export interface ReportDiff {
  baseMeasures: Record<string, Partial<Record<Benchmark, ValueChange>>>;
  objectiveMeasures: Record<string, Partial<Record<Dimension, ValueChange>>>;
  markers: { added: ConflictMarker[]; removed: ConflictMarker[] };
  /** benchmarks entering/leaving each dimension's weighting (weight > 0). */
  dimensionComposition: Partial<Record<Dimension, CompositionChange>>;
  configChanges: { path: string; from: unknown; to: unknown }[];
}

export function markerKey(m: ConflictMarker): string {
  return `${m.benchmark}|${m.scenario}|${m.student}`;
}

export function reportDiff(baseline: RunReport, whatif: RunReport): ReportDiff {
  const diff: ReportDiff = {
    baseMeasures: {},
    objectiveMeasures: {},
    markers: { added: [], removed: [] },
    dimensionComposition: {},
    configChanges: [],
  };

  const students = baseline.header.roster.map((s) => s.id);
  for (const student of students) {
    for (const benchmark of BENCHMARKS) {
      const from = baseline.base_measures.values[student]?.[benchmark];
      const to = whatif.base_measures.values[student]?.[benchmark];
      if (from !== undefined && to !== undefined && from !== to) {
        (diff.baseMeasures[student] ??= {})[benchmark] = { from, to };
      }
    }
    for (const dimension of DIMENSIONS) {
      const from = baseline.objective_measures[student]?.[dimension];
      const to = whatif.objective_measures[student]?.[dimension];
      if (from !== undefined && to !== undefined && from !== to) {
        (diff.objectiveMeasures[student] ??= {})[dimension] = { from, to };
      }
    }
  }

  const baseMarkers = new Map(baseline.conflict_markers.map((m) => [markerKey(m), m]));
  const whatifMarkers = new Map(whatif.conflict_markers.map((m) => [markerKey(m), m]));
  for (const [key, marker] of whatifMarkers) {
    if (!baseMarkers.has(key)) diff.markers.added.push(marker);
  }
  for (const [key, marker] of baseMarkers) {
    if (!whatifMarkers.has(key)) diff.markers.removed.push(marker);
  }

  for (const dimension of DIMENSIONS) {
    const before = contributing(baseline, dimension);
    const after = contributing(whatif, dimension);
    const removed = [...before].filter((b) => !after.has(b)).sort();
    const added = [...after].filter((b) => !before.has(b)).sort();
    if (removed.length || added.length) {
      diff.dimensionComposition[dimension] = { removed, added };
    }
  }

  for (const key of ["gini_threshold", "deviation_threshold", "theta_match", "subjective_mode"]) {
    const from = baseline.config[key];
    const to = whatif.config[key];
    if (from !== to) diff.configChanges.push({ path: key, from, to });
  }
  return diff;
}

function contributing(report: RunReport, dimension: Dimension): Set<string> {
  const mask = report.config.dimension_masks[dimension] ?? {};
  return new Set(Object.entries(mask).filter(([, w]) => w > 0).map(([name]) => name));
}

export function isEmptyDiff(diff: ReportDiff): boolean {
  return (
    Object.keys(diff.baseMeasures).length === 0 &&
    Object.keys(diff.objectiveMeasures).length === 0 &&
    diff.markers.added.length === 0 &&
    diff.markers.removed.length === 0 &&
    Object.keys(diff.dimensionComposition).length === 0 &&
    diff.configChanges.length === 0
  );
}

/**
 * Types mirroring the analysis service's JSON: run report bodies, envelopes,
 * and the request/response payloads of the endpoints the dashboard uses.
 * The dashboard never computes measures; these types carry server numbers only.
 */

export const BENCHMARKS = [
  "Quantity", "Quality", "Relevance",
  "Tone", "Effectiveness", "Presence",
  "Adherence", "Organisation", "Support",
] as const;
export type Benchmark = (typeof BENCHMARKS)[number];

export const DIMENSIONS = ["Contribution", "Interaction", "Role"] as const;
export type Dimension = (typeof DIMENSIONS)[number];

export const BENCHMARK_DIMENSION: Record<Benchmark, Dimension> = {
  Quantity: "Contribution", Quality: "Contribution", Relevance: "Contribution",
  Tone: "Interaction", Effectiveness: "Interaction", Presence: "Interaction",
  Adherence: "Role", Organisation: "Role", Support: "Role",
};

export interface StudentRef {
  id: string;
  display_name: string;
}

export interface MetricCell {
  value: number;
  support: number;
  orientation: "higher-better" | "lower-better";
}

export interface ConflictMarker {
  benchmark: Benchmark;
  dimension: Dimension;
  scenario: "A" | "B";
  student: string;
  gini: number;
  deviation_sd: number;
  implication_text: string;
  evidence_refs: string[];
}

export interface InequalityStat {
  benchmark: Benchmark;
  gini: number;
  team_mean: number;
  team_sd: number;
  shifted: boolean;
}

export type Mask = Record<string, number>;

export interface RunConfig {
  benchmark_masks: Record<Benchmark, Mask>;
  dimension_masks: Record<Dimension, Mask>;
  gini_threshold: number;
  deviation_threshold: number;
  theta_match: number;
  subjective_mode: string;
  [key: string]: unknown;
}

export interface ValidationLogEntry {
  claim: { subject: string; predicate: string; datum_ref: string; value: number | null };
  status: "supported" | "removed";
  supporting_datum?: string;
  reason?: string;
}

export interface AdvisoryJudgment {
  status: "ok" | "unavailable" | "withheld";
  claims: { subject: string; predicate: string; datum_ref: string; value: number | null }[];
  per_student_narrative: Record<string, string>;
  flagged_conflicts: ConflictMarker[];
  suggested_investigation_steps: string[];
  confidence: "low" | "medium" | "high";
  validation_log: ValidationLogEntry[];
  disclaimer: string;
  template_version: string;
  reason: string;
}

export interface LocalSummary {
  dimension: Dimension;
  narrative: string;
  salient_features: { id: string; student: string; direction: string; note: string }[];
  citations: string[];
  available: boolean;
}

export interface RunReport {
  schema_version: number;
  header: {
    project_id: string;
    window: { start: string; end: string };
    roster: StudentRef[];
    team_grade: number;
    provider_id: string;
    notes: string[];
  };
  config: RunConfig;
  metrics: Record<string, Record<string, MetricCell>>;
  normalized: { values: Record<string, Record<string, number>>; unavailable: string[] };
  base_measures: {
    values: Record<string, Record<Benchmark, number>>;
    used_metrics: Record<Benchmark, string[]>;
    neutral_benchmarks: Benchmark[];
  };
  objective_measures: Record<string, Record<Dimension, number>>;
  inequality: Record<Benchmark, InequalityStat>;
  conflict_markers: ConflictMarker[];
  adjusted: {
    factors: Record<string, {
      student: string;
      factor: number;
      absence_fraction: number;
      past_grade_ratio: number;
      per_dimension: Record<Dimension, number>;
    }>;
    base_measures: RunReport["base_measures"];
    objective_measures: Record<string, Record<Dimension, number>>;
    inequality: Record<Benchmark, InequalityStat>;
    conflict_markers: ConflictMarker[];
  };
  advisory: {
    local_summaries: Record<Dimension, LocalSummary>;
    judgment: AdvisoryJudgment;
  };
  pa: { mode: string; corrected: Record<string, unknown>; advisor_evidence: unknown[] };
  [key: string]: unknown;
}

export interface Annotation {
  kind: "annotation" | "override" | "reviewed";
  text: string;
  author: string;
  target?: string | null;
  created: string;
}

export interface RunEnvelope {
  run_id: string;
  project_id: string;
  bundle_version: string;
  based_on: string | null;
  config: RunConfig;
  status: "pending" | "running" | "complete" | "failed";
  created: string;
  completed?: string;
  annotations: Annotation[];
  [key: string]: unknown;
}

export interface ReportResponse {
  envelope: RunEnvelope;
  body: RunReport;
}

export interface RunRecord {
  run_id: string;
  project_id: string;
  status: RunEnvelope["status"];
  bundle_version: string;
  based_on: string | null;
  config: RunConfig;
  [key: string]: unknown;
}

export interface RunRequest {
  based_on?: string;
  bundle_version?: string;
  config?: {
    benchmark_masks?: Partial<Record<Benchmark, Mask>>;
    dimension_masks?: Partial<Record<Dimension, Mask>>;
    [key: string]: unknown;
  };
}

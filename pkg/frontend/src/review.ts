/**
 * Judgment review: narrative with claim-level supporting-datum links from the
 * validation log, plus instructor actions (annotate, mark reviewed, override)
 * persisted through the service and visible in subsequent report fetches.
 */

import type { ApiClient } from "./api.js";
import type { Annotation, ReportResponse, RunReport, ValidationLogEntry } from "./types.js";

export interface DatumLink {
  raw: string;
  kind: "marker" | "metric" | "base" | "objective" | "unknown";
  target: string;
  student: string | null;
}

export function parseDatumRef(ref: string): DatumLink {
  const parts = ref.split(":");
  if (parts.length === 4 && parts[0] === "marker") {
    return { raw: ref, kind: "marker", target: `${parts[1]} (${parts[2]})`, student: parts[3]! };
  }
  if (parts.length === 3 && (parts[0] === "metric" || parts[0] === "base" || parts[0] === "objective")) {
    return { raw: ref, kind: parts[0], target: parts[1]!, student: parts[2]! };
  }
  return { raw: ref, kind: "unknown", target: ref, student: null };
}

export interface ClaimRow {
  subject: string;
  predicate: string;
  value: number | null;
  status: "supported" | "removed";
  link: DatumLink;
  reason?: string;
}

export interface JudgmentReview {
  status: RunReport["advisory"]["judgment"]["status"];
  confidence: string;
  reason: string;
  narratives: { student: string; text: string }[];
  claimRows: ClaimRow[];
  removedCount: number;
  steps: string[];
  disclaimer: string;
  templateVersion: string;
  annotations: Annotation[];
  reviewed: boolean;
}

export function judgmentReview(response: ReportResponse): JudgmentReview {
  const judgment = response.body.advisory.judgment;
  const claimRows = judgment.validation_log.map((entry: ValidationLogEntry): ClaimRow => ({
    subject: entry.claim.subject,
    predicate: entry.claim.predicate,
    value: entry.claim.value,
    status: entry.status,
    link: parseDatumRef(entry.claim.datum_ref),
    reason: entry.reason,
  }));
  const annotations = response.envelope.annotations ?? [];
  return {
    status: judgment.status,
    confidence: judgment.confidence,
    reason: judgment.reason,
    narratives: Object.entries(judgment.per_student_narrative).map(([student, text]) => ({ student, text })),
    claimRows,
    removedCount: claimRows.filter((c) => c.status === "removed").length,
    steps: [...judgment.suggested_investigation_steps],
    disclaimer: judgment.disclaimer,
    templateVersion: judgment.template_version,
    annotations,
    reviewed: annotations.some((a) => a.kind === "reviewed"),
  };
}

export function annotate(client: ApiClient, runId: string, text: string, author: string) {
  return client.addAnnotation(runId, { kind: "annotation", text, author, target: null });
}

export function recordOverride(client: ApiClient, runId: string, text: string, author: string, target?: string) {
  return client.addAnnotation(runId, { kind: "override", text, author, target: target ?? null });
}

export function markReviewed(client: ApiClient, runId: string, author: string) {
  return client.addAnnotation(runId, { kind: "reviewed", text: "", author, target: null });
}

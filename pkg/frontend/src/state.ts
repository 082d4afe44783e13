/**
 * Dashboard view state: selected run, unsaved mask edits, drill-down selection,
 * annotation drafts. Mask edits are validated client-side (sum-to-1 per mask,
 * non-negative weights) before submission; the server remains authoritative and
 * re-validates everything.
 */

import type { Benchmark, Dimension, Mask, ReportResponse, RunRequest } from "./types.js";

export const MASK_TOLERANCE = 1e-9;

export interface MaskEdits {
  benchmark_masks: Partial<Record<Benchmark, Mask>>;
  dimension_masks: Partial<Record<Dimension, Mask>>;
}

export interface ViewState {
  projectId: string | null;
  baselineRunId: string | null;
  maskEdits: MaskEdits;
  configEdits: Record<string, number>;
  drilldown: { benchmark: Benchmark; student: string } | null;
  annotationDraft: string;
}

export function initialState(): ViewState {
  return {
    projectId: null,
    baselineRunId: null,
    maskEdits: { benchmark_masks: {}, dimension_masks: {} },
    configEdits: {},
    drilldown: null,
    annotationDraft: "",
  };
}

export function selectRun(state: ViewState, projectId: string, runId: string): ViewState {
  return { ...initialState(), projectId, baselineRunId: runId, annotationDraft: state.annotationDraft };
}

/** Start editing a mask from its server values; later weight edits build on this copy. */
export function editMaskWeight(
  state: ViewState,
  kind: keyof MaskEdits,
  maskName: string,
  entry: string,
  weight: number,
  serverMask: Mask,
): ViewState {
  const group = { ...state.maskEdits[kind] } as Record<string, Mask>;
  const current = { ...(group[maskName] ?? serverMask) };
  current[entry] = weight;
  group[maskName] = current;
  return { ...state, maskEdits: { ...state.maskEdits, [kind]: group } };
}

export function setConfigEdit(state: ViewState, key: string, value: number): ViewState {
  return { ...state, configEdits: { ...state.configEdits, [key]: value } };
}

export function hasEdits(state: ViewState): boolean {
  return (
    Object.keys(state.maskEdits.benchmark_masks).length > 0 ||
    Object.keys(state.maskEdits.dimension_masks).length > 0 ||
    Object.keys(state.configEdits).length > 0
  );
}

export interface MaskIssue {
  path: string;
  message: string;
}

export function validateMaskEdits(edits: MaskEdits): MaskIssue[] {
  const issues: MaskIssue[] = [];
  for (const [kind, masks] of Object.entries(edits) as [string, Record<string, Mask>][]) {
    for (const [name, mask] of Object.entries(masks)) {
      const path = `${kind}.${name}`;
      let total = 0;
      for (const [entry, weight] of Object.entries(mask)) {
        if (weight < 0) issues.push({ path: `${path}.${entry}`, message: `negative weight ${weight}` });
        total += weight;
      }
      if (Math.abs(total - 1.0) > MASK_TOLERANCE) {
        issues.push({ path, message: `weights sum to ${total}, expected 1` });
      }
    }
  }
  return issues;
}

/** Build the what-if run request: edited masks and scalars only, based on the baseline run. */
export function buildRunRequest(state: ViewState): RunRequest {
  if (!state.baselineRunId) throw new Error("no baseline run selected");
  const issues = validateMaskEdits(state.maskEdits);
  if (issues.length > 0) {
    throw new Error(`invalid mask edits: ${issues.map((i) => `${i.path}: ${i.message}`).join("; ")}`);
  }
  const config: RunRequest["config"] = { ...state.configEdits };
  if (Object.keys(state.maskEdits.benchmark_masks).length > 0) {
    config.benchmark_masks = state.maskEdits.benchmark_masks;
  }
  if (Object.keys(state.maskEdits.dimension_masks).length > 0) {
    config.dimension_masks = state.maskEdits.dimension_masks;
  }
  return { based_on: state.baselineRunId, config };
}

/** A report is stale for this view when it belongs to another run or schema. */
export function isStaleReport(state: ViewState, response: ReportResponse, expectedSchema = 1): boolean {
  if (response.body.schema_version !== expectedSchema) return true;
  return state.baselineRunId !== null && response.envelope.run_id !== state.baselineRunId;
}

/**
 * What-if flow: mask or threshold edits become an explicit server run (never
 * client-side arithmetic), then the returned report is diffed against the baseline.
 */

import type { ApiClient } from "./api.js";
import { reportDiff, type ReportDiff } from "./diff.js";
import { buildRunRequest, type ViewState } from "./state.js";
import type { ReportResponse } from "./types.js";

export interface WhatIfResult {
  runId: string;
  response: ReportResponse;
  diff: ReportDiff;
}

const POLL_INTERVAL_MS = 150;
const POLL_LIMIT = 400;

export async function runWhatIf(
  client: ApiClient,
  state: ViewState,
  baseline: ReportResponse,
  sleep: (ms: number) => Promise<void> = defaultSleep,
): Promise<WhatIfResult> {
  if (!state.projectId) throw new Error("no project selected");
  const request = buildRunRequest(state);
  const { run_id } = await client.submitRun(state.projectId, request);
  await waitForCompletion(client, run_id, sleep);
  const response = await client.getReport(run_id);
  return { runId: run_id, response, diff: reportDiff(baseline.body, response.body) };
}

export async function waitForCompletion(
  client: ApiClient,
  runId: string,
  sleep: (ms: number) => Promise<void> = defaultSleep,
): Promise<void> {
  for (let i = 0; i < POLL_LIMIT; i++) {
    const record = await client.getRun(runId);
    if (record.status === "complete") return;
    if (record.status === "failed") throw new Error(`run ${runId} failed`);
    await sleep(POLL_INTERVAL_MS);
  }
  throw new Error(`run ${runId} did not complete in time`);
}

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

import { describe, expect, it } from "vitest";

import { isEmptyDiff, markerKey } from "../src/diff.js";
import { editMaskWeight, initialState, selectRun, setConfigEdit } from "../src/state.js";
import type { ReportResponse, RunRequest } from "../src/types.js";
import { runWhatIf } from "../src/whatif.js";
import baselineFixture from "./fixtures/baseline.json";
import thresholdFixture from "./fixtures/whatif_threshold.json";
import maskFixture from "./fixtures/whatif_mask.json";
import { FakeApiClient, instantSleep } from "./helpers.js";

const baseline = baselineFixture as unknown as ReportResponse;
const threshold = thresholdFixture as unknown as ReportResponse;
const masked = maskFixture as unknown as ReportResponse;

function makeClient(): FakeApiClient {
  return new FakeApiClient(baseline, [
    {
      match: (r: RunRequest) => r.config?.gini_threshold === 0.35,
      response: threshold,
    },
    {
      match: (r: RunRequest) => r.config?.dimension_masks?.Contribution?.Quality === 0.0,
      response: masked,
    },
  ]);
}

function baseState() {
  return selectRun(initialState(), baseline.envelope.project_id, baseline.envelope.run_id);
}

describe("runWhatIf", () => {
  it("a no-op edit produces an empty diff", async () => {
    const client = makeClient();
    // editing the threshold back to its current value is a real run but a no-op result
    const state = setConfigEdit(baseState(), "gini_threshold", 0.3);
    const result = await runWhatIf(client, state, baseline, instantSleep);
    expect(isEmptyDiff(result.diff)).toBe(true);
    expect(client.submitted).toHaveLength(1);
    expect(client.submitted[0]!.based_on).toBe(baseline.envelope.run_id);
  });

  it("raising the gini threshold above one marker's gini removes exactly that marker", async () => {
    const client = makeClient();
    const state = setConfigEdit(baseState(), "gini_threshold", 0.35);
    const result = await runWhatIf(client, state, baseline, instantSleep);
    expect(result.diff.markers.removed.map(markerKey)).toEqual(["Quality|A|alice"]);
    expect(result.diff.markers.added).toHaveLength(0);
    expect(result.response.envelope.based_on).toBe(baseline.envelope.run_id);
  });

  it("zeroing Quality inside the Contribution mask drops it from the dimension composition", async () => {
    const client = makeClient();
    const serverMask = baseline.body.config.dimension_masks.Contribution;
    let state = baseState();
    state = editMaskWeight(state, "dimension_masks", "Contribution", "Quality", 0.0, serverMask);
    state = editMaskWeight(state, "dimension_masks", "Contribution", "Quantity", 0.5, serverMask);
    state = editMaskWeight(state, "dimension_masks", "Contribution", "Relevance", 0.5, serverMask);
    const result = await runWhatIf(client, state, baseline, instantSleep);
    expect(result.diff.dimensionComposition.Contribution).toEqual({ removed: ["Quality"], added: [] });
  });

  it("polls until the run completes", async () => {
    const client = makeClient();
    client.pendingPolls = 3;
    const state = setConfigEdit(baseState(), "gini_threshold", 0.35);
    const result = await runWhatIf(client, state, baseline, instantSleep);
    expect(result.diff.markers.removed).toHaveLength(1);
  });

  it("what-if edits go through the service, never client-side math", async () => {
    const client = makeClient();
    const state = setConfigEdit(baseState(), "gini_threshold", 0.35);
    const result = await runWhatIf(client, state, baseline, instantSleep);
    // the diffed body is the stored server report for that configuration, verbatim
    expect(result.response.body.config.gini_threshold).toBe(0.35);
    expect(result.response.body.conflict_markers).toEqual(threshold.body.conflict_markers);
  });
});

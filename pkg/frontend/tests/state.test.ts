import { describe, expect, it } from "vitest";

import {
  buildRunRequest,
  editMaskWeight,
  hasEdits,
  initialState,
  isStaleReport,
  selectRun,
  setConfigEdit,
  validateMaskEdits,
} from "../src/state.js";
import type { Mask, ReportResponse } from "../src/types.js";
import baselineFixture from "./fixtures/baseline.json";
import { clone } from "./helpers.js";

const baseline = baselineFixture as unknown as ReportResponse;
const TONE_MASK: Mask = { "2i": 1.0 };

describe("mask editing", () => {
  it("starts from the server mask and applies the edit", () => {
    let state = selectRun(initialState(), "p", "r1");
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2i", 0.6, TONE_MASK);
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2g", 0.4, TONE_MASK);
    expect(state.maskEdits.benchmark_masks.Tone).toEqual({ "2i": 0.6, "2g": 0.4 });
    expect(hasEdits(state)).toBe(true);
  });

  it("validates sum-to-one within 1e-9 with a path-qualified issue", () => {
    let state = selectRun(initialState(), "p", "r1");
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2i", 0.9, TONE_MASK);
    const issues = validateMaskEdits(state.maskEdits);
    expect(issues).toHaveLength(1);
    expect(issues[0]!.path).toBe("benchmark_masks.Tone");
    expect(issues[0]!.message).toContain("sum");
  });

  it("rejects negative weights with the entry path", () => {
    let state = selectRun(initialState(), "p", "r1");
    state = editMaskWeight(state, "dimension_masks", "Role", "Adherence", -0.2, {
      Adherence: 1 / 3, Organisation: 1 / 3, Support: 1 / 3,
    });
    const issues = validateMaskEdits(state.maskEdits);
    expect(issues.some((i) => i.path === "dimension_masks.Role.Adherence")).toBe(true);
  });

  it("accepts an exact redistribution", () => {
    let state = selectRun(initialState(), "p", "r1");
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2i", 0.75, TONE_MASK);
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2g", 0.25, TONE_MASK);
    expect(validateMaskEdits(state.maskEdits)).toEqual([]);
  });
});

describe("buildRunRequest", () => {
  it("carries only the edited masks and scalars, based on the baseline run", () => {
    let state = selectRun(initialState(), "p", "r42");
    state = setConfigEdit(state, "gini_threshold", 0.35);
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2i", 0.75, TONE_MASK);
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2g", 0.25, TONE_MASK);
    const request = buildRunRequest(state);
    expect(request.based_on).toBe("r42");
    expect(request.config).toEqual({
      gini_threshold: 0.35,
      benchmark_masks: { Tone: { "2i": 0.75, "2g": 0.25 } },
    });
  });

  it("refuses to build a request from invalid edits", () => {
    let state = selectRun(initialState(), "p", "r42");
    state = editMaskWeight(state, "benchmark_masks", "Tone", "2i", 0.5, TONE_MASK);
    expect(() => buildRunRequest(state)).toThrow(/benchmark_masks.Tone/);
  });
});

describe("stale run detection", () => {
  it("flags run-id and schema mismatches", () => {
    const state = selectRun(initialState(), "p", baseline.envelope.run_id);
    expect(isStaleReport(state, baseline)).toBe(false);
    const otherRun = clone(baseline);
    otherRun.envelope.run_id = "r-elsewhere";
    expect(isStaleReport(state, otherRun)).toBe(true);
    const otherSchema = clone(baseline);
    otherSchema.body.schema_version = 2;
    expect(isStaleReport(state, otherSchema)).toBe(true);
  });
});

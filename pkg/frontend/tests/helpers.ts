/** In-memory ApiClient over fixture reports produced by the analysis engine. */

import type { ApiClient } from "../src/api.js";
import type { Annotation, ReportResponse, RunRecord, RunRequest } from "../src/types.js";

export interface FakeRoute {
  match: (request: RunRequest) => boolean;
  response: ReportResponse;
}

export function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export class FakeApiClient implements ApiClient {
  readonly submitted: RunRequest[] = [];
  private readonly runs = new Map<string, { record: RunRecord; response: ReportResponse }>();
  private readonly annotations = new Map<string, Annotation[]>();
  private counter = 100;
  /** how many getRun polls report "running" before completing */
  pendingPolls = 0;

  constructor(private readonly baseline: ReportResponse, private readonly routes: FakeRoute[] = []) {
    this.install(baseline);
  }

  private install(response: ReportResponse): void {
    this.runs.set(response.envelope.run_id, {
      record: {
        run_id: response.envelope.run_id,
        project_id: response.envelope.project_id,
        status: "complete",
        bundle_version: response.envelope.bundle_version,
        based_on: response.envelope.based_on,
        config: response.envelope.config,
      },
      response,
    });
  }

  async listProjects() {
    return [{ project_id: this.baseline.envelope.project_id, bundle_versions: [this.baseline.envelope.bundle_version] }];
  }

  async listRuns(projectId: string): Promise<RunRecord[]> {
    return [...this.runs.values()].filter((r) => r.record.project_id === projectId).map((r) => r.record);
  }

  async getRun(runId: string): Promise<RunRecord> {
    const run = this.runs.get(runId);
    if (!run) throw new Error(`unknown run ${runId}`);
    if (this.pendingPolls > 0) {
      this.pendingPolls -= 1;
      return { ...run.record, status: "running" };
    }
    return run.record;
  }

  async getReport(runId: string): Promise<ReportResponse> {
    const run = this.runs.get(runId);
    if (!run) throw new Error(`unknown run ${runId}`);
    const response = clone(run.response);
    response.envelope.annotations = clone(this.annotations.get(runId) ?? []);
    return response;
  }

  async submitRun(_projectId: string, request: RunRequest): Promise<{ run_id: string }> {
    this.submitted.push(clone(request));
    const route = this.routes.find((r) => r.match(request));
    // unmatched requests reproduce the baseline body under a fresh run id,
    // mirroring the service's determinism for identical inputs
    const source = route ? route.response : this.baseline;
    const response = clone(source);
    response.envelope.run_id = `w${this.counter++}`;
    response.envelope.based_on = request.based_on ?? null;
    this.install(response);
    return { run_id: response.envelope.run_id };
  }

  async addAnnotation(runId: string, annotation: Omit<Annotation, "created">): Promise<Annotation> {
    const entry: Annotation = { ...annotation, created: "2026-02-01T12:00:00+00:00" };
    const list = this.annotations.get(runId) ?? [];
    list.push(entry);
    this.annotations.set(runId, list);
    return entry;
  }
}

export const instantSleep = async (_ms: number): Promise<void> => {};

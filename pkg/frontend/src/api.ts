/**
 * Thin client over the analysis service. Every number the dashboard shows comes
 * through these calls; there is no client-side fallback computation.
 */

import type { Annotation, ReportResponse, RunRecord, RunRequest } from "./types.js";

export interface ApiClient {
  listProjects(): Promise<{ project_id: string; bundle_versions: string[] }[]>;
  listRuns(projectId: string): Promise<RunRecord[]>;
  getRun(runId: string): Promise<RunRecord>;
  getReport(runId: string): Promise<ReportResponse>;
  submitRun(projectId: string, request: RunRequest): Promise<{ run_id: string }>;
  addAnnotation(runId: string, annotation: Omit<Annotation, "created">): Promise<Annotation>;
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number, readonly detail?: unknown) {
    super(message);
  }
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly baseUrl: string = "", private readonly token?: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["X-Equiscope-Token"] = this.token;
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => undefined);
    if (!response.ok) {
      throw new ApiError(`${method} ${path} failed (${response.status})`, response.status, payload);
    }
    return payload as T;
  }

  listProjects() {
    return this.request<{ project_id: string; bundle_versions: string[] }[]>("GET", "/projects");
  }

  listRuns(projectId: string) {
    return this.request<RunRecord[]>("GET", `/projects/${encodeURIComponent(projectId)}/runs`);
  }

  getRun(runId: string) {
    return this.request<RunRecord>("GET", `/runs/${encodeURIComponent(runId)}`);
  }

  getReport(runId: string) {
    return this.request<ReportResponse>("GET", `/runs/${encodeURIComponent(runId)}/report`);
  }

  submitRun(projectId: string, request: RunRequest) {
    return this.request<{ run_id: string }>("POST", `/projects/${encodeURIComponent(projectId)}/runs`, request);
  }

  addAnnotation(runId: string, annotation: Omit<Annotation, "created">) {
    return this.request<Annotation>("POST", `/runs/${encodeURIComponent(runId)}/annotations`, annotation);
  }
}

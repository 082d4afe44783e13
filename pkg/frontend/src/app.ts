/**
 * DOM wiring for the instructor dashboard. All analysis numbers come from the
 * service through ApiClient; this module only renders them and forwards actions.
 */

import { HttpApiClient, type ApiClient } from "./api.js";
import { isEmptyDiff, type ReportDiff } from "./diff.js";
import { judgmentReview, markReviewed, recordOverride, annotate } from "./review.js";
import {
  buildRunRequest,
  hasEdits,
  initialState,
  selectRun,
  setConfigEdit,
  validateMaskEdits,
  type ViewState,
} from "./state.js";
import { BENCHMARKS, type ConflictMarker, type ReportResponse } from "./types.js";
import { markerDrilldown, measuresView, radarPolygon } from "./views.js";
import { runWhatIf } from "./whatif.js";

const COLORS = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2", "#be185d", "#4d7c0f"];

function esc(value: unknown): string {
  return String(value ?? "")
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

export class Dashboard {
  private state: ViewState = initialState();
  private baseline: ReportResponse | null = null;
  private showAdjusted = false;

  constructor(private readonly client: ApiClient) {}

  async start(): Promise<void> {
    const projects = await this.client.listProjects();
    const select = el("project-select") as HTMLSelectElement;
    select.innerHTML = projects
      .map((p) => `<option value="${esc(p.project_id)}">${esc(p.project_id)}</option>`)
      .join("");
    select.onchange = () => void this.loadRuns(select.value);
    el("adjusted-toggle").onclick = () => {
      this.showAdjusted = !this.showAdjusted;
      this.renderMeasures();
    };
    el("whatif-submit").onclick = () => void this.submitWhatIf();
    el("annotate-button").onclick = () => void this.submitAnnotation("annotation");
    el("override-button").onclick = () => void this.submitAnnotation("override");
    el("reviewed-button").onclick = () => void this.submitReviewed();
    el("threshold-input").oninput = (event) => {
      const value = Number((event.target as HTMLInputElement).value);
      if (Number.isFinite(value)) this.state = setConfigEdit(this.state, "gini_threshold", value);
    };
    if (projects.length > 0) await this.loadRuns(projects[0]!.project_id);
  }

  private async loadRuns(projectId: string): Promise<void> {
    const runs = await this.client.listRuns(projectId);
    const complete = runs.filter((r) => r.status === "complete");
    const select = el("run-select") as HTMLSelectElement;
    select.innerHTML = complete
      .map((r) => `<option value="${esc(r.run_id)}">${esc(r.run_id)}</option>`)
      .join("");
    select.onchange = () => void this.loadRun(projectId, select.value);
    if (complete.length > 0) await this.loadRun(projectId, complete[complete.length - 1]!.run_id);
  }

  private async loadRun(projectId: string, runId: string): Promise<void> {
    this.state = selectRun(this.state, projectId, runId);
    this.baseline = await this.client.getReport(runId);
    this.renderMeasures();
    this.renderMarkers();
    this.renderJudgment();
    el("whatif-diff").textContent = "Submit a what-if run to see a diff against this baseline.";
  }

  private renderMeasures(): void {
    if (!this.baseline) return;
    const view = measuresView(this.baseline.body);
    const radar = this.showAdjusted ? view.adjustedRadar : view.radar;
    const size = 260;
    const polygons = radar
      .map(
        (series, i) =>
          `<polygon points="${radarPolygon(series, size)}" fill="none" ` +
          `stroke="${COLORS[i % COLORS.length]}" stroke-width="2"><title>${esc(series.student)}</title></polygon>`,
      )
      .join("");
    const axisLabels = radar[0]?.axes
      .map((axis, i) => {
        const angle = -Math.PI / 2 + (2 * Math.PI * i) / 3;
        const x = size / 2 + size * 0.47 * Math.cos(angle);
        const y = size / 2 + size * 0.47 * Math.sin(angle);
        return `<text x="${x.toFixed(0)}" y="${y.toFixed(0)}" text-anchor="middle" font-size="11">${esc(axis.dimension)}</text>`;
      })
      .join("") ?? "";
    el("radar").innerHTML =
      `<svg viewBox="0 0 ${size} ${size}" width="${size}" height="${size}">${axisLabels}${polygons}</svg>` +
      `<div>${radar
        .map(
          (s, i) =>
            `<span style="color:${COLORS[i % COLORS.length]}">&#9632; ${esc(s.student)} ` +
            s.axes.map((a) => `${esc(a.dimension[0])}=${a.value.toFixed(2)}`).join(" ") +
            "</span>",
        )
        .join("<br>")}</div>`;

    const source = this.showAdjusted ? "adjustedValues" : "values";
    const header = ["student", ...BENCHMARKS].map((h) => `<th>${esc(h)}</th>`).join("");
    const rows = view.table
      .map(
        (row) =>
          `<tr><td>${esc(row.student)}</td>` +
          BENCHMARKS.map((b) => `<td>${row[source][b].toFixed(3)}</td>`).join("") +
          "</tr>",
      )
      .join("");
    el("benchmark-table").innerHTML = `<table><thead><tr>${header}</tr></thead><tbody>${rows}</tbody></table>` +
      (view.neutralBenchmarks.length
        ? `<p>Neutral (no usable evidence): ${esc(view.neutralBenchmarks.join(", "))}</p>`
        : "");
    el("adjusted-toggle").textContent = this.showAdjusted ? "Show unadjusted" : "Show adjusted";
  }

  private renderMarkers(): void {
    if (!this.baseline) return;
    const markers = this.baseline.body.conflict_markers;
    const list = el("marker-list");
    if (markers.length === 0) {
      list.innerHTML = "<p>No conflict markers fired.</p>";
      return;
    }
    list.innerHTML = markers
      .map(
        (m, i) =>
          `<button class="marker" data-index="${i}">${esc(m.benchmark)} / ${esc(m.scenario)} / ` +
          `${esc(m.student)} (gini ${m.gini.toFixed(2)})</button>`,
      )
      .join(" ");
    list.querySelectorAll("button.marker").forEach((button) => {
      (button as HTMLButtonElement).onclick = () => {
        const marker = markers[Number((button as HTMLButtonElement).dataset.index)]!;
        this.renderDrilldown(marker);
      };
    });
  }

  private renderDrilldown(marker: ConflictMarker): void {
    if (!this.baseline) return;
    const panel = markerDrilldown(this.baseline.body, marker);
    const rows = panel.metricRows
      .map(
        (r) =>
          `<tr><td>${esc(r.metricId)}</td><td>${r.cell.value.toFixed(3)}</td>` +
          `<td>${r.normalized === null ? "-" : r.normalized.toFixed(3)}</td>` +
          `<td>${r.cell.support}</td><td>${esc(r.cell.orientation)}</td></tr>`,
      )
      .join("");
    el("drilldown").innerHTML =
      `<h3>${esc(marker.benchmark)} ${esc(marker.scenario)}: ${esc(marker.student)}</h3>` +
      `<p>${esc(marker.implication_text)}</p>` +
      `<p>gini ${panel.stat.gini.toFixed(3)}, deviation ${marker.deviation_sd.toFixed(2)} SD, ` +
      `benchmark value ${panel.benchmarkValue.toFixed(3)} vs mean ${panel.stat.team_mean.toFixed(3)}</p>` +
      `<table><thead><tr><th>metric</th><th>raw</th><th>normalized</th><th>support</th><th>orientation</th></tr></thead>` +
      `<tbody>${rows}</tbody></table>` +
      `<p>evidence: ${esc(panel.evidenceRefs.join(", "))}</p>`;
  }

  private async submitWhatIf(): Promise<void> {
    if (!this.baseline) return;
    const issues = validateMaskEdits(this.state.maskEdits);
    if (issues.length > 0) {
      el("whatif-diff").textContent = issues.map((i) => `${i.path}: ${i.message}`).join("\n");
      return;
    }
    if (!hasEdits(this.state)) {
      el("whatif-diff").textContent = "No edits to submit.";
      return;
    }
    buildRunRequest(this.state); // validation check before the round-trip
    el("whatif-diff").textContent = "Running what-if analysis...";
    const result = await runWhatIf(this.client, this.state, this.baseline);
    el("whatif-diff").textContent = renderDiffText(result.diff, result.runId);
  }

  private async submitAnnotation(kind: "annotation" | "override"): Promise<void> {
    if (!this.state.baselineRunId) return;
    const input = el("annotation-input") as HTMLTextAreaElement;
    if (!input.value.trim()) return;
    if (kind === "annotation") {
      await annotate(this.client, this.state.baselineRunId, input.value, "instructor");
    } else {
      await recordOverride(this.client, this.state.baselineRunId, input.value, "instructor");
    }
    input.value = "";
    this.baseline = await this.client.getReport(this.state.baselineRunId);
    this.renderJudgment();
  }

  private async submitReviewed(): Promise<void> {
    if (!this.state.baselineRunId) return;
    await markReviewed(this.client, this.state.baselineRunId, "instructor");
    this.baseline = await this.client.getReport(this.state.baselineRunId);
    this.renderJudgment();
  }

  private renderJudgment(): void {
    if (!this.baseline) return;
    const review = judgmentReview(this.baseline);
    const claims = review.claimRows
      .map(
        (c) =>
          `<li class="${c.status}">[${esc(c.status)}] ${esc(c.subject)} &mdash; ${esc(c.predicate)} ` +
          `&rarr; <code>${esc(c.link.raw)}</code>${c.reason ? ` (${esc(c.reason)})` : ""}</li>`,
      )
      .join("");
    el("judgment").innerHTML =
      `<p>Status: <b>${esc(review.status)}</b>, confidence ${esc(review.confidence)}` +
      (review.reviewed ? " &#10003; reviewed" : "") +
      `</p>` +
      (review.reason ? `<p>${esc(review.reason)}</p>` : "") +
      review.narratives.map((n) => `<p><b>${esc(n.student)}</b>: ${esc(n.text)}</p>`).join("") +
      (review.steps.length ? `<ul>${review.steps.map((s) => `<li>${esc(s)}</li>`).join("")}</ul>` : "") +
      `<details><summary>Validation log (${review.removedCount} removed)</summary><ul>${claims}</ul></details>` +
      `<p><i>${esc(review.disclaimer)}</i></p>` +
      (review.annotations.length
        ? `<h4>Instructor actions</h4><ul>${review.annotations
            .map((a) => `<li>[${esc(a.kind)}] ${esc(a.text)} &mdash; ${esc(a.author)}, ${esc(a.created)}</li>`)
            .join("")}</ul>`
        : "");
  }
}

function renderDiffText(diff: ReportDiff, runId: string): string {
  if (isEmptyDiff(diff)) return `What-if run ${runId}: no differences against the baseline.`;
  const lines = [`What-if run ${runId}:`];
  for (const marker of diff.markers.removed) {
    lines.push(`- marker removed: ${marker.benchmark}/${marker.scenario}/${marker.student}`);
  }
  for (const marker of diff.markers.added) {
    lines.push(`+ marker added: ${marker.benchmark}/${marker.scenario}/${marker.student}`);
  }
  for (const [dimension, change] of Object.entries(diff.dimensionComposition)) {
    if (change.removed.length) lines.push(`- ${dimension} no longer weights: ${change.removed.join(", ")}`);
    if (change.added.length) lines.push(`+ ${dimension} now weights: ${change.added.join(", ")}`);
  }
  for (const [student, changes] of Object.entries(diff.objectiveMeasures)) {
    for (const [dimension, change] of Object.entries(changes)) {
      lines.push(`~ ${student} ${dimension}: ${change.from.toFixed(3)} -> ${change.to.toFixed(3)}`);
    }
  }
  for (const change of diff.configChanges) {
    lines.push(`~ config ${change.path}: ${String(change.from)} -> ${String(change.to)}`);
  }
  return lines.join("\n");
}

export function boot(): void {
  const client = new HttpApiClient("");
  const dashboard = new Dashboard(client);
  void dashboard.start();
}

if (typeof document !== "undefined" && document.getElementById("project-select")) {
  boot();
}

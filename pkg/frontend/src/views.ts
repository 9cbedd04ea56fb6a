// Pure HTML builders; every displayed number comes verbatim from an API payload.

import { barChart, lineChart } from "./charts.js";
import { VERDICTS } from "./state.js";
import type {
  AggregatesPayload,
  AggregateView,
  MetricsPayload,
  ReviewTask,
  StoredVerdict,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function pct(value: number | null): string {
  return value === null ? "—" : `${value.toFixed(2)}%`;
}

export function metricsPanelHtml(metrics: MetricsPayload): string {
  if (metrics.total === 0) {
    return `<div class="metrics empty" data-total="0">No verdicts yet.</div>`;
  }
  const rows = VERDICTS.map(
    (v) =>
      `<tr><td>${v.title}</td><td class="num" data-count-${v.kind}="${metrics.counts[v.kind]}">` +
      `${metrics.counts[v.kind]}</td></tr>`,
  ).join("");
  return (
    `<div class="metrics" data-total="${metrics.total}" ` +
    `data-initial="${metrics.initial_accuracy}" data-adjusted="${metrics.adjusted_accuracy}">` +
    `<div class="accuracy"><span class="big">${pct(metrics.initial_accuracy)}</span> initial` +
    ` &middot; <span class="big">${pct(metrics.adjusted_accuracy)}</span> adjusted` +
    ` &middot; ${metrics.total} verdicts</div>` +
    `<table class="counts"><tbody>${rows}</tbody></table></div>`
  );
}

export function taskCardHtml(task: ReviewTask): string {
  const meta = [
    task.court_name,
    task.hearing_date,
    task.neutral_citation,
    task.word_count === null ? null : `${task.word_count} words`,
  ]
    .filter((part): part is string => part !== null && part !== "")
    .map(escapeHtml)
    .join(" &middot; ");
  const secondary = task.assigned_secondary ? escapeHtml(task.assigned_secondary) : "none";
  const repaired =
    task.resolved_label && task.resolved_label !== task.assigned_primary
      ? ` &rarr; ${escapeHtml(task.resolved_label)}`
      : "";
  return (
    `<div class="task" data-case="${escapeHtml(task.case_id)}">` +
    `<h2>${escapeHtml(task.case_id)}</h2>` +
    `<p class="meta">${meta}</p>` +
    `<p class="labels"><strong>Primary:</strong> ${escapeHtml(task.assigned_primary ?? "?")}` +
    `${repaired} <strong>Secondary:</strong> ${secondary}` +
    ` <strong>Confidence:</strong> ${task.confidence ?? "?"}/5` +
    ` <span class="repair">[${escapeHtml(task.repair_status ?? "?")} / ${escapeHtml(task.repair_method ?? "?")}]</span></p>` +
    (task.explanation ? `<p class="explanation">${escapeHtml(task.explanation)}</p>` : "") +
    `<pre class="excerpt">${escapeHtml(task.excerpt)}</pre>` +
    `<p class="remaining">${task.remaining} case(s) left in the sample.</p>` +
    `</div>`
  );
}

export function conflictHtml(existing: StoredVerdict): string {
  const label = existing.corrected_label ? ` (corrected to ${escapeHtml(existing.corrected_label)})` : "";
  return (
    `<div class="conflict">A different verdict already exists for this case: ` +
    `<strong>${escapeHtml(existing.verdict)}</strong>${label} by ` +
    `${escapeHtml(existing.reviewer)} at ${escapeHtml(existing.submitted_at)}.</div>`
  );
}

export function aggregatesHtml(agg: AggregatesPayload, view: AggregateView): string {
  let chart: string;
  if (view === "higher") {
    chart = barChart(agg.by_higher_level.map((item) => ({ label: item.name, count: item.count })));
  } else if (view === "court") {
    chart = barChart(agg.by_court.map((item) => ({ label: item.court, count: item.total })));
  } else {
    const years = agg.by_year.map((item) => item.year);
    const keys = agg.by_year.length > 0 ? Object.keys(agg.by_year[0].counts) : [];
    const series = new Map<string, number[]>();
    for (const key of keys) {
      series.set(
        key,
        agg.by_year.map((item) => item.counts[key] ?? 0),
      );
    }
    chart = lineChart(years, series);
  }
  const residual = agg.unclassified > 0 ? ` &middot; ${agg.unclassified} unclassified` : "";
  return (
    `<div class="aggregates" data-total="${agg.total}">` +
    `<p class="agg-total">${agg.total} classified case(s)${residual}</p>${chart}</div>`
  );
}

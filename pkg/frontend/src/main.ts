// DOM wiring for the review app: one screen, keyboard-first.

import { ApiClient, ApiError } from "./api.js";
import { filterAreas } from "./picker.js";
import {
  draftError,
  emptyDraft,
  requiresCorrectedLabel,
  toSubmission,
  VERDICTS,
  verdictForKey,
} from "./state.js";
import type { Draft } from "./state.js";
import type { AggregateView, ReviewTask, StoredVerdict, TaxonomyArea, VerdictKind } from "./types.js";
import { aggregatesHtml, conflictHtml, escapeHtml, metricsPanelHtml, taskCardHtml } from "./views.js";

const client = new ApiClient();

interface AppState {
  runId: string | null;
  reviewer: string;
  areas: TaxonomyArea[];
  task: ReviewTask | null;
  draft: Draft;
  aggregateView: AggregateView;
  fullTextShown: boolean;
}

const state: AppState = {
  runId: null,
  reviewer: "expert",
  areas: [],
  task: null,
  draft: emptyDraft(),
  aggregateView: "higher",
  fullTextShown: false,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function setBanner(html: string): void {
  el("banner").innerHTML = html;
}

function renderVerdictButtons(): void {
  const buttons = VERDICTS.map((option) => {
    const active = state.draft.verdict === option.kind ? " active" : "";
    return (
      `<button class="verdict${active}" data-kind="${option.kind}">` +
      `<span class="key">${option.key}</span> ${option.title}</button>`
    );
  }).join("");
  el("verdicts").innerHTML = buttons;
  document.querySelectorAll<HTMLButtonElement>("#verdicts button").forEach((button) => {
    button.addEventListener("click", () => chooseVerdict(button.dataset.kind as VerdictKind));
  });
  const error = draftError(state.draft);
  const submit = el<HTMLButtonElement>("submit");
  submit.disabled = error !== null;
  el("draft-error").textContent = state.draft.verdict === null ? "" : (error ?? "");
  const pickerWrap = el("picker-wrap");
  pickerWrap.style.display =
    state.draft.verdict !== null &&
    (requiresCorrectedLabel(state.draft.verdict) || state.draft.verdict === "minor_naming")
      ? "block"
      : "none";
  el("picked").textContent = state.draft.correctedLabel ?? "";
}

function chooseVerdict(kind: VerdictKind): void {
  state.draft.verdict = kind;
  renderVerdictButtons();
}

function renderPickerResults(query: string): void {
  const results = filterAreas(state.areas, query);
  const items = results
    .map((area) => `<li data-label="${escapeHtml(area.label)}">${escapeHtml(area.label)}</li>`)
    .join("");
  const list = el("picker-results");
  list.innerHTML = items;
  list.querySelectorAll<HTMLLIElement>("li").forEach((item) => {
    item.addEventListener("click", () => {
      state.draft.correctedLabel = item.dataset.label ?? null;
      el<HTMLInputElement>("picker").value = "";
      list.innerHTML = "";
      renderVerdictButtons();
    });
  });
}

async function refreshDashboard(): Promise<void> {
  if (!state.runId) {
    return;
  }
  try {
    const [metrics, aggregates] = await Promise.all([
      client.metrics(state.runId),
      client.aggregates(state.runId),
    ]);
    el("metrics").innerHTML = metricsPanelHtml(metrics);
    el("aggregates").innerHTML = aggregatesHtml(aggregates, state.aggregateView);
  } catch (error) {
    el("metrics").innerHTML = `<div class="error">Metrics unavailable: ${describe(error)}</div>`;
    el("aggregates").innerHTML = "";
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `HTTP ${error.status}`;
  }
  return error instanceof Error ? escapeHtml(error.message) : "unknown error";
}

async function loadNext(): Promise<void> {
  if (!state.runId) {
    return;
  }
  try {
    const task = await client.nextTask(state.runId, state.reviewer);
    state.task = task;
    state.draft = emptyDraft();
    state.fullTextShown = false;
    if (task === null) {
      el("task").innerHTML = `<div class="done">Sample exhausted — every sampled case has a verdict.</div>`;
      el("controls").style.display = "none";
      return;
    }
    el("controls").style.display = "block";
    el("task").innerHTML = taskCardHtml(task);
    el("fulltext").textContent = "Show full text";
    renderVerdictButtons();
  } catch (error) {
    setBanner(`<div class="error">Could not fetch the next task (${describe(error)}). ` +
      `<button id="retry-load">Retry</button></div>`);
    el("retry-load").addEventListener("click", () => {
      setBanner("");
      void loadNext();
    });
  }
}

async function submit(): Promise<void> {
  if (!state.runId || !state.task || draftError(state.draft) !== null) {
    return;
  }
  const submission = toSubmission(state.draft, state.task.case_id, state.reviewer);
  try {
    await client.submitVerdict(state.runId, submission);
    setBanner("");
    await refreshDashboard();
    await loadNext();
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      const body = error.body as { detail?: { existing?: StoredVerdict } };
      const existing = body.detail?.existing;
      setBanner(existing ? conflictHtml(existing) : `<div class="error">Conflicting verdict.</div>`);
      await refreshDashboard();
      await loadNext();
    } else if (error instanceof ApiError) {
      const body = error.body as { detail?: unknown };
      el("draft-error").textContent = `Rejected: ${JSON.stringify(body.detail ?? error.status)}`;
    } else {
      // network failure: keep the draft, offer a retry
      setBanner(`<div class="error">Network failure — the draft is kept. ` +
        `<button id="retry-submit">Retry submission</button></div>`);
      el("retry-submit").addEventListener("click", () => {
        setBanner("");
        void submit();
      });
    }
  }
}

async function toggleFullText(): Promise<void> {
  if (!state.runId || !state.task) {
    return;
  }
  const excerpt = document.querySelector<HTMLPreElement>("#task .excerpt");
  if (!excerpt) {
    return;
  }
  if (state.fullTextShown) {
    excerpt.textContent = state.task.excerpt;
    state.fullTextShown = false;
    el("fulltext").textContent = "Show full text";
    return;
  }
  const detail = await client.caseDetail(state.runId, state.task.case_id);
  excerpt.textContent = detail.full_text;
  state.fullTextShown = true;
  el("fulltext").textContent = "Show excerpt";
}

function bindGlobalKeys(): void {
  document.addEventListener("keydown", (event) => {
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) {
      return;
    }
    const kind = verdictForKey(event.key);
    if (kind && state.task) {
      chooseVerdict(kind);
    } else if (event.key === "Enter" && state.task) {
      void submit();
    }
  });
}

async function boot(): Promise<void> {
  const [runs, taxonomy] = await Promise.all([client.runs(), client.taxonomy()]);
  state.areas = taxonomy.areas;
  const select = el<HTMLSelectElement>("run");
  select.innerHTML = runs
    .map((run) => `<option value="${escapeHtml(run.run_id)}">${escapeHtml(run.run_id)} (${run.sampled} sampled)</option>`)
    .join("");
  if (runs.length === 0) {
    el("task").innerHTML = `<div class="done">No runs in the store yet.</div>`;
    return;
  }
  state.runId = runs[0].run_id;
  select.addEventListener("change", () => {
    state.runId = select.value;
    void refreshDashboard();
    void loadNext();
  });
  el<HTMLInputElement>("reviewer").addEventListener("change", (event) => {
    state.reviewer = (event.target as HTMLInputElement).value || "expert";
  });
  el<HTMLInputElement>("picker").addEventListener("input", (event) => {
    renderPickerResults((event.target as HTMLInputElement).value);
  });
  el<HTMLSelectElement>("agg-view").addEventListener("change", (event) => {
    state.aggregateView = (event.target as HTMLSelectElement).value as AggregateView;
    void refreshDashboard();
  });
  el("submit").addEventListener("click", () => void submit());
  el("fulltext").addEventListener("click", () => void toggleFullText());
  bindGlobalKeys();
  await refreshDashboard();
  await loadNext();
}

void boot();

// Thin typed client over the review service's JSON API.

import type {
  AggregatesPayload,
  CaseDetail,
  MetricsPayload,
  ReviewTask,
  RunSummary,
  StoredVerdict,
  TaxonomyPayload,
  VerdictSubmission,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`API error ${status}`);
  }
}

async function parseJson(response: Response): Promise<unknown> {
  const text = await response.text();
  return text ? JSON.parse(text) : null;
}

export class ApiClient {
  constructor(private base = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      throw new ApiError(response.status, await parseJson(response));
    }
    return (await parseJson(response)) as T;
  }

  runs(): Promise<RunSummary[]> {
    return this.get("/api/runs");
  }

  taxonomy(): Promise<TaxonomyPayload> {
    return this.get("/api/taxonomy");
  }

  async nextTask(runId: string, reviewer: string): Promise<ReviewTask | null> {
    const path = `/api/runs/${encodeURIComponent(runId)}/tasks/next?reviewer=${encodeURIComponent(reviewer)}`;
    const response = await fetch(this.base + path);
    if (response.status === 204) {
      return null;
    }
    if (!response.ok) {
      throw new ApiError(response.status, await parseJson(response));
    }
    return (await parseJson(response)) as ReviewTask;
  }

  async submitVerdict(runId: string, submission: VerdictSubmission): Promise<StoredVerdict> {
    const response = await fetch(`${this.base}/api/runs/${encodeURIComponent(runId)}/verdicts`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(submission),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await parseJson(response));
    }
    return (await parseJson(response)) as StoredVerdict;
  }

  metrics(runId: string): Promise<MetricsPayload> {
    return this.get(`/api/runs/${encodeURIComponent(runId)}/metrics`);
  }

  aggregates(runId: string): Promise<AggregatesPayload> {
    return this.get(`/api/runs/${encodeURIComponent(runId)}/aggregates`);
  }

  caseDetail(runId: string, caseId: string): Promise<CaseDetail> {
    return this.get(
      `/api/runs/${encodeURIComponent(runId)}/cases/${encodeURIComponent(caseId)}`,
    );
  }
}

// Thin typed client for the statguide session API.

import type {
  ApiErrorBody,
  Explanation,
  Report,
  SessionPayload,
  WorkflowSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

async function parseError(resp: Response): Promise<never> {
  let body: ApiErrorBody;
  try {
    body = (await resp.json()) as ApiErrorBody;
  } catch {
    body = { code: "unknown", message: resp.statusText, details: [] };
  }
  throw new ApiError(resp.status, body);
}

export class ApiClient {
  constructor(public baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as T;
  }

  listWorkflows(): Promise<{ workflows: WorkflowSummary[] }> {
    return this.request("/workflows");
  }

  createSession(body: {
    workflow_id: string;
    sample?: string;
    csv_text?: string;
  }): Promise<SessionPayload> {
    return this.request("/sessions", { method: "POST", body: JSON.stringify(body) });
  }

  getSession(token: string): Promise<SessionPayload> {
    return this.request(`/sessions/${token}`);
  }

  submitInputs(
    token: string,
    stepId: string,
    inputs: Record<string, unknown>,
  ): Promise<SessionPayload> {
    return this.request(`/sessions/${token}/steps/${stepId}/inputs`, {
      method: "POST",
      body: JSON.stringify({ inputs }),
    });
  }

  editStep(
    token: string,
    stepId: string,
    inputs: Record<string, unknown>,
  ): Promise<SessionPayload> {
    return this.request(`/sessions/${token}/steps/${stepId}/edit`, {
      method: "POST",
      body: JSON.stringify({ inputs }),
    });
  }

  replaceDataset(token: string, body: { csv_text?: string; sample?: string }): Promise<SessionPayload> {
    return this.request(`/sessions/${token}/dataset`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  applyAction(token: string, stepId: string, suggestionId: string): Promise<SessionPayload> {
    return this.request(`/sessions/${token}/steps/${stepId}/actions/${suggestionId}`, {
      method: "POST",
    });
  }

  getExplanation(token: string, stepId: string): Promise<Explanation> {
    return this.request(`/sessions/${token}/steps/${stepId}/explanation`);
  }

  getReport(token: string): Promise<Report> {
    return this.request(`/sessions/${token}/report`);
  }

  async getReportText(token: string): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/sessions/${token}/report?format=text`);
    if (!resp.ok) await parseError(resp);
    return resp.text();
  }

  exportModel(token: string): Promise<Record<string, unknown>> {
    return this.request(`/sessions/${token}/export/model`);
  }
}

/** Thin typed client for the labeling service's JSON API. */

import type {
  AckPayload,
  BatchPayload,
  LabelRecordOut,
  RetrainSummary,
  StatusPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? null : JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  status(): Promise<StatusPayload> {
    return this.get("/api/status");
  }

  batch(size: number): Promise<BatchPayload> {
    return this.get(`/api/batch?size=${size}`);
  }

  submitLabels(records: LabelRecordOut[]): Promise<AckPayload> {
    return this.post("/api/labels", { records });
  }

  retrain(): Promise<RetrainSummary> {
    return this.post("/api/retrain");
  }
}

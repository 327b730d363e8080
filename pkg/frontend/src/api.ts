/** Thin typed client over /api/v1; all scoring happens server-side. */

import type { RiskMode, RiskReport, SnapshotSummary, SweepResponse } from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function asApiError(response: Response): Promise<ApiError> {
  let code = 'http_error';
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body: keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class RiskApi {
  private inflight: AbortController | null = null;

  constructor(private readonly baseUrl: string = '') {}

  async snapshot(): Promise<SnapshotSummary> {
    const response = await fetch(`${this.baseUrl}/api/v1/snapshot`);
    if (!response.ok) throw await asApiError(response);
    return (await response.json()) as SnapshotSummary;
  }

  async sweep(mode: RiskMode): Promise<SweepResponse> {
    const response = await fetch(`${this.baseUrl}/api/v1/sweep?mode=${mode}`);
    if (!response.ok) throw await asApiError(response);
    return (await response.json()) as SweepResponse;
  }

  /**
   * Score a breaking set. At most one query is in flight: issuing a new one
   * aborts its predecessor, and a superseded call resolves to null.
   */
  async queryRisk(ops: string[], mode: RiskMode): Promise<RiskReport | null> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/api/v1/risk`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ operations: ops, mode }),
        signal: controller.signal,
      });
    } catch (error) {
      if (controller.signal.aborted) return null;
      throw error;
    }
    if (this.inflight === controller) this.inflight = null;
    if (controller.signal.aborted) return null;
    if (!response.ok) throw await asApiError(response);
    return (await response.json()) as RiskReport;
  }
}

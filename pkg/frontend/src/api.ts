/**
 * Thin typed client for the review service HTTP API.
 */

import type {
  CellContext,
  DecisionAck,
  DecisionBody,
  MetricsReport,
  QueuePage,
  SessionStats,
  UnreviewedPolicy,
} from './types.js';

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ReviewApi {
  constructor(private readonly baseUrl: string = '') {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`, 0);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(detail, response.status);
    }
    return response;
  }

  async session(): Promise<SessionStats> {
    return (await this.request('/api/session')).json();
  }

  async queue(offset = 0, limit = 100): Promise<QueuePage> {
    return (await this.request(`/api/queue?offset=${offset}&limit=${limit}`)).json();
  }

  /** Pull the whole queue, paging through the server limit. */
  async fullQueue(): Promise<QueuePage> {
    const first = await this.queue(0, 500);
    const items = [...first.items];
    while (items.length < first.total) {
      const next = await this.queue(items.length, 500);
      if (next.items.length === 0) break;
      items.push(...next.items);
    }
    return { total: first.total, offset: 0, limit: first.total, items };
  }

  async context(cellId: string): Promise<CellContext> {
    return (await this.request(`/api/context/${cellId}`)).json();
  }

  async decide(body: DecisionBody): Promise<DecisionAck> {
    const response = await this.request('/api/decision', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    return response.json();
  }

  async finalize(policy: UnreviewedPolicy): Promise<string> {
    const response = await this.request('/api/finalize', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ unreviewed_policy: policy }),
    });
    return response.text();
  }

  async metrics(referencePath?: string): Promise<MetricsReport> {
    const query = referencePath ? `?reference=${encodeURIComponent(referencePath)}` : '';
    return (await this.request(`/api/metrics${query}`)).json();
  }
}

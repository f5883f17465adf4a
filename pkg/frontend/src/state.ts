/**
 * Pure state core for the review client.
 *
 * The rendered state is a function of the last service responses plus
 * the optimistic pending decisions: a hard refresh rebuilds the same
 * view from the service alone.  Decisions enter a pending queue, go
 * out one at a time, and an item is only shown as committed once the
 * service acknowledged it.
 */

import { ApiError, ReviewApi } from './api.js';
import type {
  DecisionBody,
  MetricsReport,
  QueueItem,
  SessionStats,
  UnreviewedPolicy,
} from './types.js';

export interface PendingDecision {
  body: DecisionBody;
  cellId: string;
}

export interface AppState {
  session: SessionStats | null;
  queueItems: QueueItem[];
  pending: PendingDecision[];
  committedCells: Set<string>;
  selected: string | null;
  page: number;
  pageSize: number;
  error: string | null;
  inlineError: string | null;
  finalizedXml: string | null;
  metrics: MetricsReport | null;
  finalizeWarning: string | null;
}

export function initialState(pageSize = 10): AppState {
  return {
    session: null,
    queueItems: [],
    pending: [],
    committedCells: new Set(),
    selected: null,
    page: 0,
    pageSize,
    error: null,
    inlineError: null,
    finalizedXml: null,
    metrics: null,
    finalizeWarning: null,
  };
}

/** ceil(total / size); 25 items at size 10 make 3 pages. */
export function pageCount(total: number, size: number): number {
  if (total <= 0) return 0;
  return Math.ceil(total / size);
}

/**
 * Cluster queue items so that competing cells sit together: items
 * connected through a shared source or target entity (transitively)
 * form one group, ordered by first appearance.
 */
export function groupCompeting(items: QueueItem[]): QueueItem[][] {
  const parent = new Map<string, string>();
  const find = (x: string): string => {
    let root = x;
    while (parent.get(root) !== root) root = parent.get(root)!;
    let cursor = x;
    while (parent.get(cursor) !== root) {
      const next = parent.get(cursor)!;
      parent.set(cursor, root);
      cursor = next;
    }
    return root;
  };
  const union = (a: string, b: string): void => {
    parent.set(find(a), find(b));
  };
  for (const item of items) parent.set(item.cell_id, item.cell_id);
  const bySource = new Map<string, string>();
  const byTarget = new Map<string, string>();
  for (const item of items) {
    const source = bySource.get(item.entity1);
    if (source !== undefined) union(item.cell_id, source);
    else bySource.set(item.entity1, item.cell_id);
    const target = byTarget.get(item.entity2);
    if (target !== undefined) union(item.cell_id, target);
    else byTarget.set(item.entity2, item.cell_id);
  }
  const groups = new Map<string, QueueItem[]>();
  const order: string[] = [];
  for (const item of items) {
    const root = find(item.cell_id);
    if (!groups.has(root)) {
      groups.set(root, []);
      order.push(root);
    }
    groups.get(root)!.push(item);
  }
  return order.map((root) => groups.get(root)!);
}

/** Queue items still visible: not optimistically pending, not committed. */
export function visibleQueue(state: AppState): QueueItem[] {
  const hidden = new Set(state.pending.map((p) => p.cellId));
  for (const id of state.committedCells) hidden.add(id);
  return state.queueItems.filter((item) => !hidden.has(item.cell_id));
}

export function pageOf(state: AppState): QueueItem[] {
  const items = visibleQueue(state);
  const start = state.page * state.pageSize;
  return items.slice(start, start + state.pageSize);
}

export function validateDecision(body: DecisionBody): string | null {
  switch (body.action) {
    case 'AlterRelation':
      return body.new_relation ? null : 'pick one of the six relations';
    case 'AlterConfidence':
      if (body.new_confidence === undefined || Number.isNaN(body.new_confidence)) {
        return 'confidence value required';
      }
      return body.new_confidence >= 0 && body.new_confidence <= 1
        ? null
        : 'confidence must be between 0 and 1';
    case 'AddCell':
      if (!body.payload) return 'payload required';
      if (!body.payload.entity1 || !body.payload.entity2) {
        return 'both entities are required';
      }
      return body.payload.relation ? null : 'a relation is required';
    default:
      return null;
  }
}

export type Listener = (state: AppState) => void;

export class ReviewStore {
  private state: AppState;
  private listeners: Listener[] = [];
  private inFlight = false;

  constructor(private readonly api: ReviewApi, pageSize = 10) {
    this.state = initialState(pageSize);
  }

  get current(): AppState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private patch(changes: Partial<AppState>): void {
    this.state = { ...this.state, ...changes };
    this.emit();
  }

  async refresh(): Promise<void> {
    try {
      const [session, queue] = await Promise.all([this.api.session(), this.api.fullQueue()]);
      this.patch({ session, queueItems: queue.items, error: null });
    } catch (err) {
      this.patch({ error: err instanceof ApiError ? err.message : String(err) });
    }
  }

  select(cellId: string | null): void {
    this.patch({ selected: cellId, inlineError: null });
  }

  setPage(page: number): void {
    const pages = pageCount(visibleQueue(this.state).length, this.state.pageSize);
    const clamped = Math.max(0, Math.min(page, Math.max(pages - 1, 0)));
    this.patch({ page: clamped });
  }

  /** Queue a decision; optimistic hide now, committed only on ack. */
  submit(body: DecisionBody): string | null {
    const problem = validateDecision(body);
    if (problem) {
      this.patch({ inlineError: problem });
      return problem;
    }
    const cellId = body.cell_id ?? `add:${body.payload?.entity1}|${body.payload?.entity2}`;
    this.patch({
      pending: [...this.state.pending, { body, cellId }],
      inlineError: null,
    });
    void this.pump();
    return null;
  }

  /** Send pending decisions one at a time, in order. */
  private async pump(): Promise<void> {
    if (this.inFlight) return;
    const next = this.state.pending[0];
    if (!next) return;
    this.inFlight = true;
    try {
      await this.api.decide(next.body);
      const committed = new Set(this.state.committedCells);
      committed.add(next.cellId);
      this.patch({
        pending: this.state.pending.slice(1),
        committedCells: committed,
        error: null,
      });
      if (this.state.session) {
        this.patch({
          session: { ...this.state.session, decided_count: committed.size },
        });
      }
    } catch (err) {
      // reconcile: roll the optimistic hide back and surface the error
      this.patch({
        pending: this.state.pending.slice(1),
        inlineError: err instanceof ApiError ? err.message : String(err),
      });
    } finally {
      this.inFlight = false;
    }
    if (this.state.pending.length > 0) void this.pump();
  }

  /** Wait until every pending decision is acknowledged. */
  async settled(): Promise<void> {
    while (this.state.pending.length > 0 || this.inFlight) {
      await new Promise((resolve) => setTimeout(resolve, 5));
    }
  }

  setFinalizeWarning(message: string | null): void {
    this.patch({ finalizeWarning: message });
  }

  finalizeWarningFor(policy: UnreviewedPolicy): string | null {
    const decided = this.state.committedCells.size + this.state.pending.length;
    if (policy === 'Keep' && decided === 0) {
      return 'No decisions were made: finalizing now writes the input alignment unchanged (identity output).';
    }
    if (policy === 'Drop' && decided === 0 && visibleQueue(this.state).length > 0) {
      return 'Nothing was reviewed and the policy drops unreviewed cells: the output may be an empty alignment.';
    }
    return null;
  }

  async finalize(policy: UnreviewedPolicy): Promise<string | null> {
    await this.settled();
    try {
      const xml = await this.api.finalize(policy);
      this.patch({ finalizedXml: xml, error: null });
      try {
        const metrics = await this.api.metrics();
        this.patch({ metrics });
      } catch {
        // no reference configured on the service; the panel stays hidden
        this.patch({ metrics: null });
      }
      return xml;
    } catch (err) {
      this.patch({ error: err instanceof ApiError ? err.message : String(err) });
      return null;
    }
  }
}

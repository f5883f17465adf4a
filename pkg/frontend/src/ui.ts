/**
 * DOM layer: renders the store state and wires user actions.
 *
 * Competing cells always render inside one group box — the ambiguity
 * set is the unit a reviewer judges.  Keyboard: a = accept selected,
 * r = reject selected, n = select next queued cell.
 */

import { ReviewApi } from './api.js';
import { ReviewStore, groupCompeting, pageCount, pageOf, visibleQueue } from './state.js';
import type { AppState } from './state.js';
import { RELATION_GLYPHS, RELATION_SYMBOLS } from './types.js';
import type { CellContext, QueueItem, RelationGlyph, UnreviewedPolicy } from './types.js';

export class ReviewApp {
  readonly store: ReviewStore;
  private contexts = new Map<string, CellContext>();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ReviewApi,
    pageSize = 10,
  ) {
    this.store = new ReviewStore(api, pageSize);
    this.store.subscribe(() => this.render());
    this.bindKeys();
  }

  async start(): Promise<void> {
    await this.store.refresh();
  }

  private bindKeys(): void {
    this.root.ownerDocument.addEventListener('keydown', (event) => {
      const target = event.target as HTMLElement | null;
      if (target && (target.tagName === 'INPUT' || target.tagName === 'SELECT')) return;
      const selected = this.store.current.selected;
      if (event.key === 'a' && selected) {
        this.store.submit({ cell_id: selected, action: 'Accept' });
      } else if (event.key === 'r' && selected) {
        this.store.submit({ cell_id: selected, action: 'Reject' });
      } else if (event.key === 'n') {
        this.selectNext();
      }
    });
  }

  selectNext(): void {
    const items = visibleQueue(this.store.current);
    if (items.length === 0) return;
    const current = this.store.current.selected;
    const index = items.findIndex((item) => item.cell_id === current);
    const next = items[(index + 1) % items.length];
    this.store.select(next.cell_id);
    void this.loadContext(next.cell_id);
  }

  async loadContext(cellId: string): Promise<void> {
    if (!this.contexts.has(cellId)) {
      try {
        this.contexts.set(cellId, await this.api.context(cellId));
      } catch {
        return; // context panel simply stays empty
      }
    }
    this.render();
  }

  // --- rendering -------------------------------------------------------

  render(): void {
    const state = this.store.current;
    this.root.replaceChildren(
      this.renderHeader(state),
      ...(state.error ? [this.renderErrorBanner(state.error)] : []),
      ...(state.inlineError ? [this.renderInlineError(state.inlineError)] : []),
      this.renderQueue(state),
      this.renderDetail(state),
      this.renderAddForm(),
      this.renderFinalize(state),
    );
  }

  private el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
  ): HTMLElementTagNameMap[K] {
    const node = this.root.ownerDocument.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
  }

  private renderHeader(state: AppState): HTMLElement {
    const header = this.el('header', 'header');
    const title = this.el('h1', undefined, 'Alignment review');
    header.appendChild(title);
    if (state.session) {
      const s = state.session;
      const done = s.decided_count;
      header.appendChild(
        this.el(
          'p',
          'progress',
          `${s.onto1} vs ${s.onto2} — ${s.alignment_size} cells, ` +
            `${visibleQueue(state).length} queued, ${done} decided`,
        ),
      );
    }
    return header;
  }

  private renderErrorBanner(message: string): HTMLElement {
    const banner = this.el('div', 'banner error-banner');
    banner.appendChild(this.el('span', undefined, `Service unreachable or failing: ${message} `));
    const retry = this.el('button', 'retry', 'Retry');
    retry.addEventListener('click', () => void this.store.refresh());
    banner.appendChild(retry);
    return banner;
  }

  private renderInlineError(message: string): HTMLElement {
    return this.el('div', 'banner inline-error', message);
  }

  private renderQueue(state: AppState): HTMLElement {
    const panel = this.el('section', 'queue');
    const items = visibleQueue(state);
    if (items.length === 0) {
      panel.appendChild(this.el('p', 'complete', 'Review complete — the queue is empty.'));
      return panel;
    }
    const pageItems = pageOf(state);
    const pageIds = new Set(pageItems.map((item) => item.cell_id));
    for (const group of groupCompeting(pageItems)) {
      const box = this.el('div', group.length > 1 ? 'group competing' : 'group');
      if (group.length > 1) {
        box.appendChild(this.el('div', 'group-label', `${group.length} competing cells`));
      }
      for (const item of group) {
        if (!pageIds.has(item.cell_id)) continue;
        box.appendChild(this.renderRow(item, state));
      }
      panel.appendChild(box);
    }
    panel.appendChild(this.renderPager(state, items.length));
    return panel;
  }

  private renderRow(item: QueueItem, state: AppState): HTMLElement {
    const row = this.el('div', 'row');
    row.dataset.cellId = item.cell_id;
    if (state.selected === item.cell_id) row.classList.add('selected');

    const label = this.el(
      'span',
      'names',
      `${item.entity1_name} ${item.relation_symbol} ${item.entity2_name}`,
    );
    label.addEventListener('click', () => {
      this.store.select(item.cell_id);
      void this.loadContext(item.cell_id);
    });
    row.appendChild(label);

    if (item.ambiguous) row.appendChild(this.el('span', 'badge', 'ambiguous'));

    const bar = this.el('span', 'confidence-bar');
    const fill = this.el('span', 'confidence-fill');
    fill.style.width = `${Math.round(item.confidence * 100)}%`;
    bar.appendChild(fill);
    row.appendChild(bar);
    row.appendChild(this.el('span', 'confidence', item.confidence.toFixed(3)));

    const accept = this.el('button', 'accept', 'accept');
    accept.addEventListener('click', () =>
      this.store.submit({ cell_id: item.cell_id, action: 'Accept' }),
    );
    const reject = this.el('button', 'reject', 'reject');
    reject.addEventListener('click', () =>
      this.store.submit({ cell_id: item.cell_id, action: 'Reject' }),
    );
    row.appendChild(accept);
    row.appendChild(reject);
    return row;
  }

  private renderPager(state: AppState, total: number): HTMLElement {
    const pager = this.el('nav', 'pager');
    const pages = pageCount(total, state.pageSize);
    const previous = this.el('button', 'prev', '<');
    previous.disabled = state.page === 0;
    previous.addEventListener('click', () => this.store.setPage(state.page - 1));
    const next = this.el('button', 'next', '>');
    next.disabled = state.page >= pages - 1;
    next.addEventListener('click', () => this.store.setPage(state.page + 1));
    pager.appendChild(previous);
    pager.appendChild(this.el('span', 'page-info', `page ${state.page + 1} of ${Math.max(pages, 1)}`));
    pager.appendChild(next);
    return pager;
  }

  private renderDetail(state: AppState): HTMLElement {
    const panel = this.el('section', 'detail');
    if (!state.selected) return panel;
    const context = this.contexts.get(state.selected);
    if (!context) {
      panel.appendChild(this.el('p', undefined, 'loading context...'));
      return panel;
    }
    for (const side of [context.entity1, context.entity2]) {
      const card = this.el('div', 'entity-card');
      card.appendChild(this.el('h3', undefined, side.name));
      card.appendChild(this.el('p', 'kind', side.kind ?? 'unknown kind'));
      if (side.labels.length) {
        card.appendChild(this.el('p', 'labels', `labels: ${side.labels.join(' | ')}`));
      }
      for (const [relation, names] of Object.entries(side.neighbors)) {
        if (names.length) {
          card.appendChild(this.el('p', 'neighbors', `${relation}: ${names.join(', ')}`));
        }
      }
      for (const assertion of side.assertions) {
        card.appendChild(this.el('p', 'assertion', assertion));
      }
      panel.appendChild(card);
    }
    if (context.competing.length) {
      const list = this.el('div', 'competing-list');
      list.appendChild(this.el('h3', undefined, 'competing cells'));
      for (const other of context.competing) {
        list.appendChild(
          this.el(
            'p',
            'competing-cell',
            `${other.entity1_name} ${other.relation_symbol} ${other.entity2_name} ` +
              `[${other.confidence.toFixed(3)}]`,
          ),
        );
      }
      panel.appendChild(list);
    }
    panel.appendChild(this.renderAlterControls(state.selected));
    return panel;
  }

  private renderAlterControls(cellId: string): HTMLElement {
    const controls = this.el('div', 'alter');
    const select = this.el('select', 'relation-picker');
    for (const glyph of RELATION_GLYPHS) {
      const option = this.el('option', undefined, `${RELATION_SYMBOLS[glyph]} (${glyph})`);
      option.value = glyph;
      select.appendChild(option);
    }
    const alterRelation = this.el('button', 'alter-relation', 'alter relation');
    alterRelation.addEventListener('click', () =>
      this.store.submit({
        cell_id: cellId,
        action: 'AlterRelation',
        new_relation: select.value as RelationGlyph,
      }),
    );
    const confidence = this.el('input', 'confidence-input');
    confidence.type = 'number';
    confidence.min = '0';
    confidence.max = '1';
    confidence.step = '0.01';
    const alterConfidence = this.el('button', 'alter-confidence', 'alter confidence');
    alterConfidence.addEventListener('click', () =>
      this.store.submit({
        cell_id: cellId,
        action: 'AlterConfidence',
        new_confidence: Number.parseFloat(confidence.value),
      }),
    );
    controls.appendChild(select);
    controls.appendChild(alterRelation);
    controls.appendChild(confidence);
    controls.appendChild(alterConfidence);
    return controls;
  }

  private renderAddForm(): HTMLElement {
    const form = this.el('section', 'add-cell');
    form.appendChild(this.el('h3', undefined, 'add a missing correspondence'));
    const entity1 = this.el('input', 'add-entity1');
    entity1.placeholder = 'entity IRI from the first ontology';
    const entity2 = this.el('input', 'add-entity2');
    entity2.placeholder = 'entity IRI from the second ontology';
    const relation = this.el('select', 'add-relation');
    for (const glyph of RELATION_GLYPHS) {
      const option = this.el('option', undefined, `${RELATION_SYMBOLS[glyph]} (${glyph})`);
      option.value = glyph;
      relation.appendChild(option);
    }
    const confidence = this.el('input', 'add-confidence');
    confidence.type = 'number';
    confidence.value = '1.0';
    confidence.min = '0';
    confidence.max = '1';
    confidence.step = '0.01';
    const submit = this.el('button', 'add-submit', 'add cell');
    submit.addEventListener('click', () => {
      this.store.submit({
        action: 'AddCell',
        payload: {
          entity1: entity1.value.trim(),
          entity2: entity2.value.trim(),
          relation: relation.value as RelationGlyph,
          confidence: Number.parseFloat(confidence.value || '1'),
        },
      });
    });
    for (const node of [entity1, entity2, relation, confidence, submit]) {
      form.appendChild(node);
    }
    return form;
  }

  private renderFinalize(state: AppState): HTMLElement {
    const panel = this.el('section', 'finalize');
    const policy = this.el('select', 'policy');
    for (const value of ['Keep', 'Drop'] as UnreviewedPolicy[]) {
      const option = this.el('option', undefined, `${value} unreviewed cells`);
      option.value = value;
      policy.appendChild(option);
    }
    const button = this.el('button', 'finalize-button', 'finalize');
    const warning = this.el('p', 'finalize-warning', state.finalizeWarning ?? '');
    button.addEventListener('click', () => {
      const chosen = policy.value as UnreviewedPolicy;
      const caution = this.store.finalizeWarningFor(chosen);
      if (caution && state.finalizeWarning !== caution) {
        // first click surfaces the warning; a second click confirms
        this.store.setFinalizeWarning(caution);
        return;
      }
      void this.store.finalize(chosen);
    });
    panel.appendChild(policy);
    panel.appendChild(button);
    panel.appendChild(warning);

    if (state.finalizedXml !== null) {
      const done = this.el('div', 'finalized');
      done.appendChild(this.el('p', undefined, 'validated alignment written on the service side'));
      const download = this.el('a', 'download', 'download alignment XML');
      download.setAttribute(
        'href',
        `data:application/xml;charset=utf-8,${encodeURIComponent(state.finalizedXml)}`,
      );
      download.setAttribute('download', 'validated-alignment.rdf');
      done.appendChild(download);
      panel.appendChild(done);
    }
    if (state.metrics) {
      const metrics = this.el('div', 'metrics');
      metrics.appendChild(this.el('h3', undefined, 'evaluation against the reference'));
      const table = this.el('table', 'metrics-table');
      for (const [key, value] of Object.entries(state.metrics)) {
        const row = this.el('tr');
        row.appendChild(this.el('td', 'metric-name', key));
        row.appendChild(this.el('td', 'metric-value', String(value)));
        table.appendChild(row);
      }
      metrics.appendChild(table);
      panel.appendChild(metrics);
    }
    return panel;
  }
}

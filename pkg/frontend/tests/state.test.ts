import { describe, expect, it } from 'vitest';

import {
  groupCompeting,
  initialState,
  pageCount,
  pageOf,
  validateDecision,
  visibleQueue,
} from '../src/state';
import type { QueueItem } from '../src/types';

function item(id: string, entity1: string, entity2: string, confidence = 1.0): QueueItem {
  return {
    cell_id: id,
    entity1: `http://x.org/a#${entity1}`,
    entity2: `http://x.org/b#${entity2}`,
    entity1_name: entity1,
    entity2_name: entity2,
    relation: '=',
    relation_symbol: '≡',
    confidence,
    ambiguous: false,
    competing: [],
  };
}

describe('pageCount', () => {
  it('matches the 25-items / page-size-10 example', () => {
    expect(pageCount(25, 10)).toBe(3);
  });

  it('handles exact multiples and empty queues', () => {
    expect(pageCount(20, 10)).toBe(2);
    expect(pageCount(0, 10)).toBe(0);
    expect(pageCount(1, 10)).toBe(1);
  });
});

describe('groupCompeting', () => {
  it('keeps unrelated cells in singleton groups', () => {
    const groups = groupCompeting([item('1', 'Italy', 'Italy'), item('2', 'France', 'France')]);
    expect(groups.map((g) => g.length)).toEqual([1, 1]);
  });

  it('clusters cells sharing a source entity', () => {
    const congo1 = item('1', 'Repub._of_the_Congo', 'Democratic_Republic_of_the_Congo', 0.76);
    const congo2 = item('2', 'Repub._of_the_Congo', 'Congo', 0.8);
    const other = item('3', 'Italy', 'Italy');
    const groups = groupCompeting([congo1, other, congo2]);
    const congoGroup = groups.find((g) => g.length === 2);
    expect(congoGroup).toBeDefined();
    expect(congoGroup!.map((c) => c.cell_id).sort()).toEqual(['1', '2']);
  });

  it('clusters transitively through shared targets', () => {
    const a = item('1', 'Student', 'Student');
    const b = item('2', 'Scholar', 'Student');
    const c = item('3', 'PhD_Student', 'Student');
    const groups = groupCompeting([a, b, c]);
    expect(groups).toHaveLength(1);
    expect(groups[0]).toHaveLength(3);
  });
});

describe('visibleQueue and paging', () => {
  it('hides pending and committed cells', () => {
    const state = initialState(10);
    state.queueItems = [item('1', 'A', 'A'), item('2', 'B', 'B'), item('3', 'C', 'C')];
    state.pending = [{ body: { cell_id: '2', action: 'Accept' }, cellId: '2' }];
    state.committedCells = new Set(['3']);
    expect(visibleQueue(state).map((i) => i.cell_id)).toEqual(['1']);
  });

  it('slices the current page', () => {
    const state = initialState(2);
    state.queueItems = ['1', '2', '3', '4', '5'].map((n) => item(n, `E${n}`, `F${n}`));
    state.page = 1;
    expect(pageOf(state).map((i) => i.cell_id)).toEqual(['3', '4']);
  });
});

describe('validateDecision', () => {
  it('requires a relation for AlterRelation', () => {
    expect(validateDecision({ cell_id: 'x', action: 'AlterRelation' })).not.toBeNull();
    expect(
      validateDecision({ cell_id: 'x', action: 'AlterRelation', new_relation: '>' }),
    ).toBeNull();
  });

  it('bounds AlterConfidence to [0, 1]', () => {
    expect(
      validateDecision({ cell_id: 'x', action: 'AlterConfidence', new_confidence: 1.2 }),
    ).not.toBeNull();
    expect(
      validateDecision({ cell_id: 'x', action: 'AlterConfidence', new_confidence: 0.4 }),
    ).toBeNull();
  });

  it('requires both entities and a relation for AddCell', () => {
    expect(validateDecision({ action: 'AddCell' })).not.toBeNull();
    expect(
      validateDecision({
        action: 'AddCell',
        payload: { entity1: 'a#x', entity2: '', relation: '=', confidence: 1 },
      }),
    ).not.toBeNull();
    expect(
      validateDecision({
        action: 'AddCell',
        payload: { entity1: 'a#x', entity2: 'b#y', relation: '=', confidence: 1 },
      }),
    ).toBeNull();
  });

  it('accepts bare Accept and Reject', () => {
    expect(validateDecision({ cell_id: 'x', action: 'Accept' })).toBeNull();
    expect(validateDecision({ cell_id: 'x', action: 'Reject' })).toBeNull();
  });
});

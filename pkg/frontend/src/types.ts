/**
 * Wire types mirroring the review service JSON payloads exactly.
 * The client never computes metrics itself; it renders what the
 * service reports.
 */

export type RelationGlyph = '=' | '<' | '>' | '%' | 'InstanceOf' | 'Overlaps';

export const RELATION_GLYPHS: RelationGlyph[] = ['=', '<', '>', '%', 'InstanceOf', 'Overlaps'];

export const RELATION_SYMBOLS: Record<RelationGlyph, string> = {
  '=': '≡',
  '<': '⊑',
  '>': '⊒',
  '%': '⊥',
  InstanceOf: '∈',
  Overlaps: '≬',
};

export interface QueueItem {
  cell_id: string;
  entity1: string;
  entity2: string;
  entity1_name: string;
  entity2_name: string;
  relation: RelationGlyph;
  relation_symbol: string;
  confidence: number;
  ambiguous: boolean;
  competing: string[];
}

export interface QueuePage {
  total: number;
  offset: number;
  limit: number;
  items: QueueItem[];
}

export interface SessionStats {
  onto1: string;
  onto2: string;
  alignment_size: number;
  queue_size: number;
  decided_count: number;
  decision_log_length: number;
  policy: { kinds: string[]; threshold: number };
}

export interface EntityView {
  iri: string;
  name: string;
  kind: string | null;
  labels: string[];
  neighbors: Record<string, string[]>;
  assertions: string[];
}

export interface CellContext {
  cell: QueueItem;
  entity1: EntityView;
  entity2: EntityView;
  competing: QueueItem[];
}

export type DecisionAction =
  | 'Accept'
  | 'Reject'
  | 'AlterRelation'
  | 'AlterConfidence'
  | 'AddCell';

export interface DecisionBody {
  cell_id?: string;
  action: DecisionAction;
  new_relation?: RelationGlyph;
  new_confidence?: number;
  payload?: {
    entity1: string;
    entity2: string;
    relation: RelationGlyph;
    confidence: number;
  };
  actor?: string;
}

export interface DecisionAck {
  ok: boolean;
  effective: Record<string, unknown>;
  queue_size: number;
}

export interface MetricsReport {
  alignment_size: number;
  reference_size: number;
  tp: number;
  fp: number;
  fn: number;
  precision: number | null;
  recall: number | null;
  f1: number | string | null;
  overall: number | string | null;
  ambiguity_degree: number;
  delta: number;
  delta_classification: string;
  [key: string]: unknown;
}

export type UnreviewedPolicy = 'Keep' | 'Drop';

/** Wire types mirroring the labeling service's JSON API. */

export interface StatusPayload {
  num_docs: number;
  labels: number;
  unlabeled: number;
  per_type_counts: Record<string, number>;
  types: string[];
  streams: string[];
  retrains: number;
  oracle_mode: boolean;
  scores_ready: boolean;
}

export interface BatchItemPayload {
  doc_id: string;
  streams: Record<string, string[]>;
  scores: Record<string, number>;
  rationale: { sf_type: string; score: number } | null;
}

export interface BatchPayload {
  items: BatchItemPayload[];
  remaining_unlabeled: number;
}

export interface LabelRecordOut {
  doc_id: string;
  types: string[];
}

export interface AckPayload {
  ok: boolean;
  labels: number;
}

export interface RetrainSummary {
  retrains: number;
  labels_used: number;
  per_type_positives: Record<string, number>;
  degenerate_types: string[];
}

/** One batch document prepared for display: suggestions sorted by score descending. */
export interface UiBatchItem {
  docId: string;
  streams: Record<string, string[]>;
  suggestions: Array<[string, number]>;
  rationale: { sfType: string; score: number } | null;
}

export function toUiItem(item: BatchItemPayload): UiBatchItem {
  const suggestions = Object.entries(item.scores).sort((a, b) =>
    b[1] === a[1] ? a[0].localeCompare(b[0]) : b[1] - a[1],
  ) as Array<[string, number]>;
  return {
    docId: item.doc_id,
    streams: item.streams,
    suggestions,
    rationale: item.rationale
      ? { sfType: item.rationale.sf_type, score: item.rationale.score }
      : null,
  };
}

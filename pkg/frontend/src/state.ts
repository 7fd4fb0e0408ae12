/** Session state machine for one annotator working through ranked batches.
 *
 * Invariants kept here rather than in the DOM: "not relevant" and type
 * checkboxes are mutually exclusive in every reachable state, a card is
 * submitted at most once, and every outgoing record is validated against the
 * inventory fetched from the server at startup.
 */

import { ApiClient, ApiError } from "./api.js";
import type { RetrainSummary, StatusPayload, UiBatchItem } from "./types.js";
import { toUiItem } from "./types.js";

export interface CardState {
  item: UiBatchItem;
  types: Set<string>;
  notRelevant: boolean;
  submitted: boolean;
  error: string | null;
}

export class SessionController {
  inventory: string[] = [];
  streams: string[] = [];
  cards: CardState[] = [];
  labeledTotal = 0;
  remainingUnlabeled = 0;
  retrains = 0;
  banner: string | null = null;
  busy = false;

  constructor(readonly api: ApiClient) {}

  async init(): Promise<StatusPayload> {
    const status = await this.api.status();
    this.inventory = status.types;
    this.streams = status.streams;
    this.labeledTotal = status.labels;
    this.remainingUnlabeled = status.unlabeled;
    this.retrains = status.retrains;
    return status;
  }

  card(docId: string): CardState {
    const found = this.cards.find((c) => c.item.docId === docId);
    if (!found) throw new Error(`no card for doc ${docId}`);
    return found;
  }

  /** Fetch a fresh batch; on network failure existing cards are kept so no
   * locally entered labels are lost. */
  async loadBatch(size: number): Promise<void> {
    let payload;
    try {
      payload = await this.api.batch(size);
    } catch (err) {
      this.banner = `could not load batch: ${String(err)} (retry)`;
      throw err;
    }
    this.banner = null;
    this.cards = payload.items.map((item) => ({
      item: toUiItem(item),
      types: new Set<string>(),
      notRelevant: false,
      submitted: false,
      error: null,
    }));
    this.remainingUnlabeled = payload.remaining_unlabeled;
  }

  toggleType(docId: string, sfType: string): void {
    if (!this.inventory.includes(sfType)) {
      throw new Error(`type ${sfType} is not in the inventory`);
    }
    const card = this.card(docId);
    if (card.submitted) return;
    if (card.types.has(sfType)) {
      card.types.delete(sfType);
    } else {
      card.types.add(sfType);
      card.notRelevant = false; // mutually exclusive
    }
  }

  toggleNotRelevant(docId: string): void {
    const card = this.card(docId);
    if (card.submitted) return;
    card.notRelevant = !card.notRelevant;
    if (card.notRelevant) card.types.clear(); // mutually exclusive
  }

  /** A card is submittable once it carries an explicit judgment. */
  canSubmit(docId: string): boolean {
    const card = this.card(docId);
    return !card.submitted && (card.notRelevant || card.types.size > 0);
  }

  async submitCard(docId: string): Promise<void> {
    const card = this.card(docId);
    if (!this.canSubmit(docId)) {
      throw new Error(`card ${docId} is not submittable`);
    }
    const types = [...card.types].sort();
    for (const t of types) {
      if (!this.inventory.includes(t)) throw new Error(`type ${t} not in inventory`);
    }
    try {
      const ack = await this.api.submitLabels([{ doc_id: docId, types }]);
      card.submitted = true;
      card.error = null;
      this.labeledTotal = ack.labels;
      this.remainingUnlabeled = Math.max(0, this.remainingUnlabeled - 1);
    } catch (err) {
      // card stays editable; the error is shown inline
      card.error = err instanceof ApiError ? err.detail : String(err);
      throw err;
    }
  }

  batchComplete(): boolean {
    return this.cards.length > 0 && this.cards.every((c) => c.submitted);
  }

  allDone(): boolean {
    return this.cards.length === 0 && this.remainingUnlabeled === 0;
  }

  async retrainAndNext(size: number): Promise<RetrainSummary> {
    this.busy = true;
    try {
      const summary = await this.api.retrain();
      this.retrains = summary.retrains;
      await this.loadBatch(size);
      return summary;
    } finally {
      this.busy = false;
    }
  }
}

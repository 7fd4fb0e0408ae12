/** DOM rendering for the annotation session; no framework, full re-render. */

import type { SessionController } from "./state.js";
import type { CardState } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderHeader(controller: SessionController): HTMLElement {
  const header = el("header", "session-header");
  header.appendChild(el("h1", undefined, "Situation-frame labeling"));
  const stats = el("div", "stats");
  stats.appendChild(
    el("span", "stat labels-count", `labels: ${controller.labeledTotal}`),
  );
  stats.appendChild(
    el("span", "stat unlabeled-count", `unlabeled: ${controller.remainingUnlabeled}`),
  );
  stats.appendChild(el("span", "stat retrains-count", `retrains: ${controller.retrains}`));
  header.appendChild(stats);
  return header;
}

function renderTokens(card: CardState): HTMLElement {
  const box = el("div", "doc-tokens");
  for (const [stream, tokens] of Object.entries(card.item.streams)) {
    const row = el("div", "stream-row");
    row.appendChild(el("span", "stream-name", stream));
    row.appendChild(el("span", "stream-text", tokens.join(" ")));
    box.appendChild(row);
  }
  return box;
}

function renderSuggestions(card: CardState): HTMLElement {
  const box = el("div", "suggestions");
  box.appendChild(el("span", "suggestions-label", "model suggestions:"));
  for (const [sfType, score] of card.item.suggestions.slice(0, 3)) {
    box.appendChild(el("span", "suggestion", `${sfType} (${score.toFixed(2)})`));
  }
  return box;
}

function renderCard(
  controller: SessionController,
  card: CardState,
  rerender: () => void,
): HTMLElement {
  const root = el("section", card.submitted ? "card submitted" : "card");
  root.dataset.docId = card.item.docId;
  const title = el("h2", undefined, card.item.docId);
  if (card.item.rationale) {
    title.appendChild(
      el(
        "span",
        "rationale",
        ` picked for ${card.item.rationale.sfType} (${card.item.rationale.score.toFixed(2)})`,
      ),
    );
  }
  root.appendChild(title);
  root.appendChild(renderTokens(card));
  root.appendChild(renderSuggestions(card));

  const form = el("div", "label-form");
  for (const sfType of controller.inventory) {
    const label = el("label", "type-choice");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.value = sfType;
    box.checked = card.types.has(sfType);
    box.disabled = card.submitted;
    box.addEventListener("change", () => {
      controller.toggleType(card.item.docId, sfType);
      rerender();
    });
    label.appendChild(box);
    label.appendChild(document.createTextNode(sfType));
    form.appendChild(label);
  }
  const nrLabel = el("label", "not-relevant-choice");
  const nrBox = document.createElement("input");
  nrBox.type = "checkbox";
  nrBox.className = "not-relevant";
  nrBox.checked = card.notRelevant;
  nrBox.disabled = card.submitted;
  nrBox.addEventListener("change", () => {
    controller.toggleNotRelevant(card.item.docId);
    rerender();
  });
  nrLabel.appendChild(nrBox);
  nrLabel.appendChild(document.createTextNode("not relevant"));
  form.appendChild(nrLabel);
  root.appendChild(form);

  const submit = el("button", "submit-card", card.submitted ? "submitted" : "submit");
  submit.disabled = card.submitted || !controller.canSubmit(card.item.docId);
  submit.addEventListener("click", async () => {
    submit.disabled = true;
    try {
      await controller.submitCard(card.item.docId);
    } catch {
      // inline error is rendered from card.error
    }
    rerender();
  });
  root.appendChild(submit);
  if (card.error) root.appendChild(el("p", "card-error", card.error));
  return root;
}

export function renderApp(
  controller: SessionController,
  root: HTMLElement,
  { batchSize = 8 }: { batchSize?: number } = {},
): void {
  const rerender = () => renderApp(controller, root, { batchSize });
  root.replaceChildren();
  root.appendChild(renderHeader(controller));

  if (controller.banner) {
    const banner = el("div", "banner");
    banner.appendChild(el("span", undefined, controller.banner));
    const retry = el("button", "retry", "retry");
    retry.addEventListener("click", async () => {
      try {
        await controller.loadBatch(batchSize);
      } catch {
        // banner stays up
      }
      rerender();
    });
    banner.appendChild(retry);
    root.appendChild(banner);
  }

  if (controller.allDone()) {
    root.appendChild(el("p", "all-done", "all documents labeled"));
    return;
  }

  const list = el("main", "cards");
  for (const card of controller.cards) {
    list.appendChild(renderCard(controller, card, rerender));
  }
  root.appendChild(list);

  const footer = el("footer", "session-footer");
  const next = el("button", "retrain-next", "Retrain & get next batch");
  next.disabled = controller.busy || !controller.batchComplete();
  next.addEventListener("click", async () => {
    next.disabled = true;
    try {
      await controller.retrainAndNext(batchSize);
    } catch {
      // banner set by the controller
    }
    rerender();
  });
  footer.appendChild(next);
  root.appendChild(footer);
}

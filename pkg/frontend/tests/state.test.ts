import { beforeEach, describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { SessionController } from "../src/state.js";
import { toUiItem } from "../src/types.js";
import { FakeApi, batchItem } from "./fake_api.js";

const TYPES = ["type01", "type02", "type03"];

function controllerWith(queue = [[batchItem("d1", { type01: 1.5, type02: 0.2, type03: -1 })]]) {
  const api = new FakeApi(TYPES, queue, 10);
  return { api, controller: new SessionController(api.asClient()) };
}

describe("SessionController selections", () => {
  let api: FakeApi;
  let controller: SessionController;

  beforeEach(async () => {
    ({ api, controller } = controllerWith());
    await controller.init();
    await controller.loadBatch(5);
  });

  it("fetches the inventory from the server at startup", () => {
    expect(controller.inventory).toEqual(TYPES);
  });

  it("type checkboxes and not-relevant are mutually exclusive", () => {
    controller.toggleType("d1", "type01");
    controller.toggleType("d1", "type02");
    expect(controller.card("d1").types.size).toBe(2);
    controller.toggleNotRelevant("d1");
    expect(controller.card("d1").notRelevant).toBe(true);
    expect(controller.card("d1").types.size).toBe(0);
    controller.toggleType("d1", "type03");
    expect(controller.card("d1").notRelevant).toBe(false);
    expect([...controller.card("d1").types]).toEqual(["type03"]);
  });

  it("refuses types outside the inventory", () => {
    expect(() => controller.toggleType("d1", "bogus")).toThrow(/inventory/);
  });

  it("requires an explicit judgment before submitting", async () => {
    expect(controller.canSubmit("d1")).toBe(false);
    controller.toggleType("d1", "type01");
    expect(controller.canSubmit("d1")).toBe(true);
    await controller.submitCard("d1");
    expect(controller.card("d1").submitted).toBe(true);
    expect(controller.canSubmit("d1")).toBe(false);
    await expect(controller.submitCard("d1")).rejects.toThrow(/not submittable/);
  });

  it("not-relevant submits an empty types list", async () => {
    controller.toggleNotRelevant("d1");
    await controller.submitCard("d1");
    expect(api.submitted).toEqual([[{ doc_id: "d1", types: [] }]]);
  });

  it("a rejected submission leaves the card editable with an inline error", async () => {
    controller.toggleType("d1", "type01");
    api.failNextSubmit = new ApiError(400, "unknown doc_id d1");
    await expect(controller.submitCard("d1")).rejects.toThrow(/400/);
    const card = controller.card("d1");
    expect(card.submitted).toBe(false);
    expect(card.error).toBe("unknown doc_id d1");
    await controller.submitCard("d1"); // retry succeeds
    expect(card.submitted).toBe(true);
    expect(card.error).toBeNull();
  });

  it("tracks the server label count", async () => {
    controller.toggleType("d1", "type02");
    await controller.submitCard("d1");
    expect(controller.labeledTotal).toBe(1);
  });
});

describe("batch progression", () => {
  it("batchComplete only once every card is submitted", async () => {
    const { controller } = controllerWith([
      [
        batchItem("d1", { type01: 1, type02: 0, type03: 0 }),
        batchItem("d2", { type01: 0, type02: 1, type03: 0 }),
      ],
    ]);
    await controller.init();
    await controller.loadBatch(5);
    expect(controller.batchComplete()).toBe(false);
    controller.toggleNotRelevant("d1");
    await controller.submitCard("d1");
    expect(controller.batchComplete()).toBe(false);
    controller.toggleType("d2", "type02");
    await controller.submitCard("d2");
    expect(controller.batchComplete()).toBe(true);
  });

  it("retrainAndNext retrains then loads a batch without labeled docs", async () => {
    const { api, controller } = controllerWith([
      [batchItem("d1", { type01: 1, type02: 0, type03: 0 })],
      [
        batchItem("d1", { type01: 1, type02: 0, type03: 0 }),
        batchItem("d2", { type01: 0, type02: 1, type03: 0 }),
      ],
    ]);
    await controller.init();
    await controller.loadBatch(5);
    controller.toggleType("d1", "type01");
    await controller.submitCard("d1");
    const summary = await controller.retrainAndNext(5);
    expect(summary.retrains).toBe(1);
    expect(api.retrainCount).toBe(1);
    expect(controller.cards.map((c) => c.item.docId)).toEqual(["d2"]);
  });

  it("suggestions are sorted by score descending", () => {
    const item = toUiItem(batchItem("d9", { water: 0.3, medical: 2.1, food: -0.4 }));
    expect(item.suggestions.map(([t]) => t)).toEqual(["medical", "water", "food"]);
  });

  it("failed batch load keeps existing cards and raises a banner", async () => {
    const { api, controller } = controllerWith();
    await controller.init();
    await controller.loadBatch(5);
    controller.toggleType("d1", "type01"); // local selection must survive
    api.batch = async () => {
      throw new ApiError(503, "service unavailable");
    };
    await expect(controller.loadBatch(5)).rejects.toThrow(/503/);
    expect(controller.banner).toMatch(/retry/);
    expect([...controller.card("d1").types]).toEqual(["type01"]);
  });
});

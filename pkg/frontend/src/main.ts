import { ApiClient } from "./api.js";
import { renderApp } from "./render.js";
import { SessionController } from "./state.js";

const BATCH_SIZE = 8;

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const controller = new SessionController(new ApiClient(""));
  try {
    await controller.init(); // inventory comes from the server, never hardcoded
    await controller.loadBatch(BATCH_SIZE);
  } catch (err) {
    controller.banner = `service unreachable: ${String(err)} (retry)`;
  }
  renderApp(controller, root, { batchSize: BATCH_SIZE });
}

void boot();

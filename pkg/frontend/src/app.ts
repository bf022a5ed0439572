// Entry point: configure from query parameters, resume or bootstrap, mount.
//
//   /chat/?server=http://127.0.0.1:8000&seed=7&name=Dorothy

import { ChatSession } from "./session.js";
import { mountChat } from "./ui.js";

async function main(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? window.location.origin;
  const seedParam = params.get("seed");
  const session = new ChatSession({
    server,
    seed: seedParam !== null ? Number(seedParam) : null,
    culture: params.get("culture"),
    storage: window.localStorage,
  });
  const name = params.get("name");
  if (name) session.setPlaceholder("$name", name);

  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const ui = mountChat(document, root, session);

  if (!session.hasState()) {
    try {
      await session.bootstrap();
    } catch (error) {
      ui.statusEl.textContent = `offline: ${String(error)} - reload to retry`;
    }
  }
  ui.refresh();
}

void main();

// Scripted browser session against a live hub: bootstrap, the two canonical
// utterances, plan badges, the state inspector, and storage round-trip.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { spawn, type ChildProcess } from "node:child_process";
import { createServer } from "node:net";
import { Window } from "happy-dom";

import { ChatSession } from "../src/session.js";
import { mountChat } from "../src/ui.js";

let hub: ChildProcess;
let server: string;

async function freePort(): Promise<number> {
  return await new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      const port = address.port;
      probe.close(() => resolve(port));
    });
  });
}

async function waitForReady(base: string): Promise<void> {
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      const response = await fetch(`${base}/cair/v1/state?seed=0`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("hub did not become ready");
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
}

beforeAll(async () => {
  const port = await freePort();
  server = `http://127.0.0.1:${port}`;
  hub = spawn("python3", ["-m", "cair.hub", "--port", String(port), "--log-level", "warning"], {
    stdio: ["ignore", "ignore", "inherit"],
  });
  await waitForReady(server);
});

afterAll(() => {
  hub?.kill();
});

interface Mounted {
  window: Window;
  session: ChatSession;
  ui: ReturnType<typeof mountChat>;
  doc: Document;
}

function mount(existingWindow?: Window, seed = 7): Mounted {
  const window = existingWindow ?? new Window();
  const doc = window.document as unknown as Document;
  const session = new ChatSession({
    server,
    seed,
    storage: window.localStorage as unknown as Storage,
    fetchFn: (input, init) => fetch(input, init),
  });
  const root = doc.createElement("div");
  doc.body.appendChild(root);
  const ui = mountChat(doc, root, session);
  return { window, session, ui, doc };
}

function texts(root: HTMLElement, selector: string): string[] {
  return Array.from(root.querySelectorAll(selector)).map((node) => node.textContent ?? "");
}

describe("webchat session", () => {
  it("runs the scripted session: bootstrap, plan badge, inspector, storage", async () => {
    const { window, session, ui, doc } = mount();

    // Bootstrap: greeting bubble rendered, state in local storage.
    session.setPlaceholder("$name", "Dorothy");
    const greeting = await session.bootstrap();
    ui.refresh();
    expect(greeting).not.toContain("$name");
    const bubbles = texts(doc.body as unknown as HTMLElement, ".bubble.agent.dialogue");
    expect(bubbles).toContain(greeting);
    expect(window.localStorage.getItem("cair-chat-state")).not.toBeNull();

    // First canonical utterance: a device plan the browser cannot execute.
    await ui.send("Play the song Hey Brother");
    const planSentences = texts(doc.body as unknown as HTMLElement, ".bubble.plan-sentence");
    expect(planSentences).toContain("Playing Hey Brother for you.");
    const badges = texts(doc.body as unknown as HTMLElement, ".badge.skipped-action");
    expect(badges).toContain("play_song (skipped)");

    // Second canonical utterance: knowledge-base effect on the state.
    const response = await session.send("I love music");
    ui.refresh();
    expect(response.client_state.t).toBe("music");
    const rows = texts(doc.body as unknown as HTMLElement, ".likeliness-entry");
    expect(rows).toContain("music: VeryHigh");

    // Local storage mirrors the last successful response exactly.
    const stored = JSON.parse(window.localStorage.getItem("cair-chat-state") ?? "null");
    expect(stored).toEqual(response.client_state);
  });

  it("locks the composer while a request is in flight and on empty input", async () => {
    const { session, ui, doc } = mount();
    await session.bootstrap();
    ui.refresh();
    // Empty input: send stays disabled.
    ui.input.value = "";
    ui.refresh();
    expect(ui.sendButton.disabled).toBe(true);
    ui.input.value = "hello there";
    ui.refresh();
    expect(ui.sendButton.disabled).toBe(false);

    const pending = ui.send("hello there");
    // One in-flight request at a time: the composer is locked until done.
    expect(ui.input.disabled).toBe(true);
    await pending;
    expect(ui.input.disabled).toBe(false);
    expect(texts(doc.body as unknown as HTMLElement, ".bubble.user")).toContain("hello there");
  });

  it("resumes from stored state without a second initial call", async () => {
    const { window, session } = mount();
    await session.bootstrap();
    const storedBefore = window.localStorage.getItem("cair-chat-state");

    let initialCalls = 0;
    const countingFetch = (input: string, init?: RequestInit) => {
      if (input.includes("/cair/v1/state")) initialCalls += 1;
      return fetch(input, init);
    };
    const doc = window.document as unknown as Document;
    const revisit = new ChatSession({
      server,
      seed: 7,
      storage: window.localStorage as unknown as Storage,
      fetchFn: countingFetch,
    });
    const root = doc.createElement("div");
    doc.body.appendChild(root);
    mountChat(doc, root, revisit);
    expect(revisit.hasState()).toBe(true);
    expect(initialCalls).toBe(0);
    expect(window.localStorage.getItem("cair-chat-state")).toBe(storedBefore);

    await revisit.send("what a fine day");
    expect(window.localStorage.getItem("cair-chat-state")).not.toBe(storedBefore);
  });

  it("reproduces agent lines when replaying with the same seed", async () => {
    const utterances = ["I love music", "tell me something nice", "what else is there"];

    async function conversation(): Promise<string[]> {
      const { session } = mount(undefined, 123);
      await session.bootstrap();
      const lines: string[] = [];
      for (const utterance of utterances) {
        const response = await session.send(utterance);
        lines.push(response.dialogue_sentence);
      }
      return lines;
    }

    expect(await conversation()).toEqual(await conversation());
  });

  it("a failed turn keeps state and offers retry", async () => {
    const { window, session, ui } = mount();
    await session.bootstrap();
    const stored = window.localStorage.getItem("cair-chat-state");
    const badSession = session as unknown as { api: { server: string } };
    // Point the API at a dead port; the turn must fail cleanly.
    (badSession.api as unknown as { server: string })["server"] = "http://127.0.0.1:9";
    await ui.send("hello?");
    expect(ui.statusEl.textContent).toContain("retry");
    expect(window.localStorage.getItem("cair-chat-state")).toBe(stored);
  });
});

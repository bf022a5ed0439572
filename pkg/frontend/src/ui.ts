// DOM rendering and event wiring. The document is injected so the same
// code runs in a browser and under a DOM shim in tests.

import type { ChatSession } from "./session.js";

export interface ChatUi {
  refresh(): void;
  send(utterance: string): Promise<void>;
  input: HTMLInputElement;
  sendButton: HTMLButtonElement;
  transcriptEl: HTMLElement;
  inspectorEl: HTMLElement;
  statusEl: HTMLElement;
}

export function mountChat(doc: Document, root: HTMLElement, session: ChatSession): ChatUi {
  root.innerHTML = "";

  const transcriptEl = el(doc, "div", "transcript");
  const inspectorEl = buildInspector(doc);
  const statusEl = el(doc, "div", "status");

  const form = el(doc, "form", "composer") as HTMLFormElement;
  const input = el(doc, "input", "chat-input") as HTMLInputElement;
  input.setAttribute("placeholder", "Say something...");
  input.setAttribute("autocomplete", "off");
  const sendButton = el(doc, "button", "chat-send") as HTMLButtonElement;
  sendButton.setAttribute("type", "submit");
  sendButton.textContent = "Send";
  form.append(input, sendButton);

  root.append(transcriptEl, inspectorEl, statusEl, form);

  let lastFailed: string | null = null;

  const ui: ChatUi = {
    input,
    sendButton,
    transcriptEl,
    inspectorEl,
    statusEl,
    refresh() {
      renderTranscript(doc, transcriptEl, session);
      renderInspector(doc, inspectorEl, session);
      const locked = session.busy;
      input.disabled = locked;
      sendButton.disabled = locked || input.value.trim() === "";
    },
    async send(utterance: string) {
      statusEl.textContent = "";
      // Start the turn first: the session takes its in-flight lock
      // synchronously, so the refresh below renders the locked composer.
      const pending = session.send(utterance);
      ui.refresh();
      try {
        await pending;
        lastFailed = null;
        input.value = "";
      } catch (error) {
        // Failed turns leave the stored state untouched; offer a retry.
        lastFailed = utterance;
        statusEl.textContent = `${String(error)} `;
        const retry = el(doc, "button", "retry") as HTMLButtonElement;
        retry.setAttribute("type", "button");
        retry.textContent = "retry";
        retry.addEventListener("click", () => {
          if (lastFailed) void ui.send(lastFailed);
        });
        statusEl.append(retry);
      }
      ui.refresh();
    },
  };

  input.addEventListener("input", () => ui.refresh());
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const utterance = input.value.trim();
    if (!utterance || session.busy) return;
    void ui.send(utterance);
  });

  ui.refresh();
  return ui;
}

function renderTranscript(doc: Document, container: HTMLElement, session: ChatSession): void {
  container.innerHTML = "";
  for (const entry of session.transcript) {
    if (entry.kind === "skipped-action" || entry.kind === "plan-action") {
      const badge = el(doc, "span", `badge ${entry.kind}`);
      badge.textContent =
        entry.kind === "skipped-action" ? `${entry.text} (skipped)` : `${entry.text} (executed)`;
      container.append(badge);
      continue;
    }
    const bubble = el(doc, "div", `bubble ${entry.speaker} ${entry.kind}`);
    bubble.textContent = entry.text;
    container.append(bubble);
  }
}

function buildInspector(doc: Document): HTMLElement {
  const details = el(doc, "details", "inspector");
  const summary = el(doc, "summary", "inspector-title");
  summary.textContent = "Client state";
  details.append(summary, el(doc, "div", "inspector-body"));
  return details;
}

function renderInspector(doc: Document, inspector: HTMLElement, session: ChatSession): void {
  const body = inspector.querySelector(".inspector-body") as HTMLElement;
  body.innerHTML = "";
  const state = session.state;
  if (!state) {
    body.textContent = "no state yet";
    return;
  }
  const facts = el(doc, "dl", "state-facts");
  addFact(doc, facts, "topic", state.t);
  addFact(doc, facts, "last sentence type", state.lt);
  addFact(doc, facts, "queued types", state.q.join(", ") || "-");
  addFact(doc, facts, "topics with used sentences", String(session.usedTopicCount()));
  addFact(doc, facts, "pending proposal", state.p ?? "-");
  body.append(facts);

  const heading = el(doc, "div", "likeliness-title");
  heading.textContent = "likeliness overrides";
  body.append(heading);
  const list = el(doc, "ul", "likeliness");
  for (const row of session.likelinessRows()) {
    const item = el(doc, "li", "likeliness-entry");
    item.textContent = `${row.label}: ${row.level}`;
    list.append(item);
  }
  body.append(list);

  const raw = el(doc, "pre", "raw-state");
  raw.textContent = JSON.stringify(state);
  body.append(raw);
}

function addFact(doc: Document, list: HTMLElement, term: string, value: string): void {
  const dt = el(doc, "dt", "");
  dt.textContent = term;
  const dd = el(doc, "dd", "");
  dd.textContent = value;
  list.append(dt, dd);
}

function el(doc: Document, tag: string, className: string): HTMLElement {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  return node;
}

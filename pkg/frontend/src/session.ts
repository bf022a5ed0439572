// Conversation session: state round-trip, transcript, placeholder handling.
//
// The state blob in storage always mirrors the last successful server
// response; profile placeholders live only in the browser and are applied
// to rendered text, never to anything sent or stored as state.

import { HubApi, type FetchFn } from "./api.js";
import {
  LIKELINESS_LABELS,
  type HubResponse,
  type TranscriptEntry,
  type WireState,
} from "./types.js";

const STATE_KEY = "cair-chat-state";
const PROFILE_KEY = "cair-chat-profile";
const TOPIC_MAP_KEY = "cair-chat-topics";

export interface SessionOptions {
  server: string;
  seed?: number | null;
  culture?: string | null;
  storage: Storage;
  fetchFn?: FetchFn;
}

export interface LikelinessRow {
  label: string;
  level: string;
}

export class ChatSession {
  readonly transcript: TranscriptEntry[] = [];
  state: WireState | null = null;
  placeholders: Record<string, string> = {};
  private readonly api: HubApi;
  private readonly storage: Storage;
  private readonly seed: number | null;
  private readonly culture: string | null;
  private turnCount = 0;
  private inFlight = false;
  // Topic ids learned from observed state transitions (index -> id); the
  // wire state indexes topics by position, ids only surface for the
  // current topic, so the map grows as the conversation visits topics.
  private topicByIndex: Record<number, string> = {};

  constructor(options: SessionOptions) {
    this.api = new HubApi(options.server, options.fetchFn);
    this.storage = options.storage;
    this.seed = options.seed ?? null;
    this.culture = options.culture ?? null;
    this.state = readJson<WireState>(this.storage, STATE_KEY);
    this.placeholders = readJson<Record<string, string>>(this.storage, PROFILE_KEY) ?? {};
    this.topicByIndex = readJson<Record<number, string>>(this.storage, TOPIC_MAP_KEY) ?? {};
  }

  hasState(): boolean {
    return this.state !== null;
  }

  get busy(): boolean {
    return this.inFlight;
  }

  substitute(text: string): string {
    let out = text;
    for (const key of Object.keys(this.placeholders).sort((a, b) => b.length - a.length)) {
      out = out.split(key).join(this.placeholders[key]);
    }
    return out;
  }

  setPlaceholder(key: string, value: string): void {
    this.placeholders[key] = value;
    this.storage.setItem(PROFILE_KEY, JSON.stringify(this.placeholders));
  }

  async bootstrap(): Promise<string> {
    const response = await this.api.initialState(this.culture, this.seed);
    this.state = response.client_state;
    this.storage.setItem(STATE_KEY, JSON.stringify(this.state));
    const greeting = this.substitute(response.dialogue_sentence);
    this.transcript.push({ speaker: "agent", text: greeting, kind: "dialogue" });
    return greeting;
  }

  async send(utterance: string): Promise<HubResponse> {
    if (this.inFlight) throw new Error("a request is already in flight");
    if (!this.state) throw new Error("no conversation state; bootstrap first");
    const text = utterance.trim();
    if (!text) throw new Error("utterance must not be empty");

    this.inFlight = true;
    try {
      const previous = this.state;
      const response = await this.api.hub(text, previous, this.turnSeed());
      this.learnTopics(previous, response.client_state);
      // Persist before the next send can start: the stored state always
      // equals the last successful response.
      this.state = response.client_state;
      this.storage.setItem(STATE_KEY, JSON.stringify(this.state));
      this.storage.setItem(TOPIC_MAP_KEY, JSON.stringify(this.topicByIndex));
      this.turnCount += 1;

      this.transcript.push({ speaker: "user", text, kind: "dialogue" });
      if (response.plan_sentence) {
        this.transcript.push({
          speaker: "agent",
          text: this.substitute(response.plan_sentence),
          kind: "plan-sentence",
        });
      }
      for (const action of response.plan) {
        // A browser executes nothing: every plan action renders as skipped.
        this.transcript.push({ speaker: "agent", text: action.action, kind: "skipped-action" });
      }
      this.transcript.push({
        speaker: "agent",
        text: this.substitute(response.dialogue_sentence),
        kind: "dialogue",
      });
      return response;
    } finally {
      this.inFlight = false;
    }
  }

  likelinessRows(): LikelinessRow[] {
    if (!this.state) return [];
    const rows: LikelinessRow[] = [];
    this.state.l.forEach((level, index) => {
      if (level === 0) return;
      rows.push({
        label: this.topicByIndex[index] ?? `topic #${index}`,
        level: LIKELINESS_LABELS[level] ?? String(level),
      });
    });
    return rows;
  }

  usedTopicCount(): number {
    return this.state ? this.state.u.filter((mask) => mask !== 0).length : 0;
  }

  private turnSeed(): number | null {
    if (this.seed === null) return null;
    // Per-turn seed derived from (base seed, turn index) so replaying the
    // same utterances after clearing the session reproduces the agent.
    return (this.seed + this.turnCount * 2654435761) % 2147483647;
  }

  private learnTopics(before: WireState, after: WireState): void {
    // When a turn both moves to a topic and changes exactly one likeliness
    // entry, that entry's index must belong to the new current topic.
    const changed: number[] = [];
    for (let i = 0; i < after.l.length; i += 1) {
      if ((before.l[i] ?? 0) !== after.l[i]) changed.push(i);
    }
    if (changed.length === 1) {
      this.topicByIndex[changed[0]] = after.t;
    }
  }
}

function readJson<T>(storage: Storage, key: string): T | null {
  try {
    const raw = storage.getItem(key);
    return raw ? (JSON.parse(raw) as T) : null;
  } catch {
    return null;
  }
}

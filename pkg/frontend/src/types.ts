// Wire types of the hub protocol. The client never interprets the state
// beyond display: it stores the blob and sends it back verbatim.

export interface WireState {
  v: number;
  t: string;
  lt: string;
  q: string[];
  l: number[];
  u: number[];
  p: string | null;
}

export interface WireAction {
  action: string;
  args: Record<string, string>;
}

export interface InitialStateResponse {
  client_state: WireState;
  dialogue_sentence: string;
}

export interface HubResponse {
  dialogue_sentence: string;
  plan_sentence: string | null;
  plan: WireAction[];
  client_state: WireState;
}

export type TranscriptKind = "dialogue" | "plan-sentence" | "plan-action" | "skipped-action";

export interface TranscriptEntry {
  speaker: "user" | "agent";
  text: string;
  kind: TranscriptKind;
}

export const LIKELINESS_LABELS: Record<number, string> = {
  1: "VeryLow",
  2: "Low",
  3: "Medium",
  4: "High",
  5: "VeryHigh",
};

// Thin fetch wrapper over the two public hub endpoints.

import type { HubResponse, InitialStateResponse, WireState } from "./types.js";

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class HubApi {
  constructor(
    private readonly server: string,
    private readonly fetchFn: FetchFn = (input, init) => fetch(input, init),
  ) {}

  async initialState(culture: string | null, seed: number | null): Promise<InitialStateResponse> {
    const params = new URLSearchParams();
    if (culture) params.set("culture", culture);
    if (seed !== null) params.set("seed", String(seed));
    const query = params.toString();
    const url = `${this.server}/cair/v1/state${query ? `?${query}` : ""}`;
    const response = await this.fetchFn(url);
    if (!response.ok) throw new Error(`initial state failed: ${response.status}`);
    return (await response.json()) as InitialStateResponse;
  }

  async hub(sentence: string, state: WireState, seed: number | null): Promise<HubResponse> {
    const body: Record<string, unknown> = { client_sentence: sentence, client_state: state };
    if (seed !== null) body.seed = seed;
    const response = await this.fetchFn(`${this.server}/cair/v1/hub`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`turn failed: ${response.status} ${detail}`);
    }
    return (await response.json()) as HubResponse;
  }
}

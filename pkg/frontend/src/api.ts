// Thin typed client for the play service; ``fetch`` is injectable so the
// test suite can run without a server.

import type { SessionView } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export interface NewGameOptions {
  agent: string;
  humanSeat: 1 | 2;
  budgetMs?: number;
  seed?: number;
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly base: string = "",
  ) {}

  private async request(path: string, init?: RequestInit): Promise<SessionView> {
    const resp = await this.fetchImpl(this.base + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const detail =
        typeof body?.detail === "string" ? body.detail : `HTTP ${resp.status}`;
      throw new ApiError(resp.status, detail);
    }
    return body as SessionView;
  }

  createSession(options: NewGameOptions): Promise<SessionView> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({
        agent: options.agent,
        human_seat: options.humanSeat,
        budget_ms: options.budgetMs ?? null,
        seed: options.seed ?? null,
      }),
    });
  }

  getState(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}`);
  }

  postMove(id: string, move: string): Promise<SessionView> {
    return this.request(`/sessions/${id}/move`, {
      method: "POST",
      body: JSON.stringify({ move }),
    });
  }

  postDecision(id: string, index: number): Promise<SessionView> {
    return this.request(`/sessions/${id}/decision`, {
      method: "POST",
      body: JSON.stringify({ index }),
    });
  }
}

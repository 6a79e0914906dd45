// Typed fetch client for the game server's /v1 API.

import type { Move, PackMeta, PlayerView, SessionEvent } from "./types.js";

export interface ApiError {
  status: number;
  code: string;
  message: string;
  rule_code?: string;
}

export interface CreatedSession {
  session_id: string;
  seed: number;
  seats: { seat: number; kind: string; policy: string | null }[];
  join_tokens: Record<string, string>;
}

export interface MoveResult {
  view: PlayerView;
  events: SessionEvent[];
  cursor: number;
}

export class Client {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init: RequestInit = {}, token?: string): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (token) headers["Authorization"] = `Bearer ${token}`;
    const response = await this.fetchImpl(`${this.base}${path}`, { ...init, headers });
    const body = await response.json();
    if (!response.ok) {
      throw {
        status: response.status,
        code: body.code ?? "UNKNOWN",
        message: body.message ?? response.statusText,
        rule_code: body.rule_code,
      } satisfies ApiError;
    }
    return body as T;
  }

  createSession(options: {
    ruleset: string;
    player_count: number;
    bot_policies: string[];
    seed?: number;
    pack?: string;
  }): Promise<CreatedSession> {
    return this.request("/v1/sessions", { method: "POST", body: JSON.stringify(options) });
  }

  getView(sessionId: string, token: string): Promise<PlayerView> {
    return this.request(`/v1/sessions/${sessionId}/view`, {}, token);
  }

  getPack(sessionId: string, token: string): Promise<PackMeta> {
    return this.request(`/v1/sessions/${sessionId}/pack`, {}, token);
  }

  submitMove(sessionId: string, token: string, move: Move): Promise<MoveResult> {
    return this.request(
      `/v1/sessions/${sessionId}/moves`,
      { method: "POST", body: JSON.stringify({ move }) },
      token,
    );
  }

  getEvents(
    sessionId: string,
    token: string,
    cursor: number,
  ): Promise<{ events: SessionEvent[]; next_cursor: number; finished: boolean }> {
    return this.request(`/v1/sessions/${sessionId}/events?cursor=${cursor}`, {}, token);
  }
}

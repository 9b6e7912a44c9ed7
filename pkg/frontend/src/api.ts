/** Thin fetch client. Nothing here inspects game content: requests are
 * forwarded, responses are parsed, failures become ApiError. */

import type { MoveDoc, MoveResult, ScenarioCard, SessionState } from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly body: unknown;

  constructor(status: number, body: unknown) {
    const text =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `request failed with status ${status}`;
    super(text);
    this.status = status;
    this.body = body;
  }
}

async function parse<T>(response: {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}): Promise<T> {
  if (response.status === 204) {
    return undefined as T;
  }
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body as T;
}

export class Api {
  readonly base: string;

  constructor(base: string) {
    this.base = base.replace(/\/$/, "");
  }

  async listScenarios(): Promise<ScenarioCard[]> {
    return parse(await fetch(`${this.base}/scenarios`));
  }

  async createSession(scenario: string): Promise<SessionState> {
    return parse(
      await fetch(`${this.base}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ scenario }),
      }),
    );
  }

  async getSession(id: string): Promise<SessionState> {
    return parse(await fetch(`${this.base}/sessions/${id}`));
  }

  async postMove(id: string, move: MoveDoc): Promise<MoveResult> {
    return parse(
      await fetch(`${this.base}/sessions/${id}/moves`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(move),
      }),
    );
  }

  async deleteSession(id: string): Promise<void> {
    await fetch(`${this.base}/sessions/${id}`, { method: "DELETE" });
  }
}

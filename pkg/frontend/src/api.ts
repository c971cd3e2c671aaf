// Thin typed client for the session service.  Every mutation of debugger
// state goes through these five calls.

import type { ServiceError, SessionView } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class SessionApi {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async call(method: string, path: string, body?: unknown): Promise<SessionView> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = (await response.json()) as SessionView | ServiceError;
    if (!response.ok) {
      const message = (payload as ServiceError).error ?? `HTTP ${response.status}`;
      throw new ApiError(response.status, message);
    }
    return payload as SessionView;
  }

  createSession(source: string, init: Record<string, number>): Promise<SessionView> {
    return this.call("POST", "/sessions", { source, init });
  }

  state(sessionId: string): Promise<SessionView> {
    return this.call("GET", `/sessions/${sessionId}/state`);
  }

  step(sessionId: string, redexIndex: number): Promise<SessionView> {
    return this.call("POST", `/sessions/${sessionId}/step`, { redexIndex });
  }

  back(sessionId: string): Promise<SessionView> {
    return this.call("POST", `/sessions/${sessionId}/back`, {});
  }

  reverse(sessionId: string): Promise<SessionView> {
    return this.call("POST", `/sessions/${sessionId}/reverse`, {});
  }
}

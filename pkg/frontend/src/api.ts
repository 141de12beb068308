/**
 * Thin typed client over the review-service HTTP endpoints.
 *
 * Decisions are the only write path that touches code; abort only stops the
 * session. Reads throw on any non-200 so callers never render half a view
 * from an error body.
 */
import type {
  ChangesReport,
  DecisionOutcome,
  ScopeReport,
  SessionReport,
  SuggestionsReport,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base: string, fetchImpl?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async getJson<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(`${this.base}${path}`);
    if (!res.ok) {
      throw new Error(`GET ${path} failed: ${res.status}`);
    }
    return (await res.json()) as T;
  }

  session(): Promise<SessionReport> {
    return this.getJson("/session");
  }

  scope(): Promise<ScopeReport> {
    return this.getJson("/scope");
  }

  suggestions(): Promise<SuggestionsReport> {
    return this.getJson("/suggestions");
  }

  changes(): Promise<ChangesReport> {
    return this.getJson("/changes");
  }

  /** URL for the live event stream, resuming after `cursor - 1`. */
  eventsUrl(cursor: number): string {
    return `${this.base}/events?cursor=${cursor}`;
  }

  async postDecision(id: string, decision: 0 | 1): Promise<DecisionOutcome> {
    const res = await this.fetchImpl(
      `${this.base}/suggestions/${encodeURIComponent(id)}/decision`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ decision }),
      },
    );
    switch (res.status) {
      case 200:
        return { kind: "recorded" };
      case 404:
        return { kind: "unknown_suggestion" };
      case 409:
        return { kind: "already_decided" };
      case 410:
        return { kind: "session_over" };
      case 422:
        return { kind: "invalid" };
      default:
        throw new Error(`decision post failed: ${res.status}`);
    }
  }

  /** Returns true when the abort landed, false when the session was over. */
  async abort(): Promise<boolean> {
    const res = await this.fetchImpl(`${this.base}/session/abort`, {
      method: "POST",
    });
    if (res.status === 202) return true;
    if (res.status === 409 || res.status === 410) return false;
    throw new Error(`abort failed: ${res.status}`);
  }
}

/**
 * Server-sent-events client for the session stream.
 *
 * Hand-rolled rather than EventSource because resuming goes through the
 * `?cursor=` query parameter, which EventSource cannot change between
 * reconnects. The parser is incremental: chunks may split lines, events,
 * even UTF-8 sequences, and nothing may be lost.
 */
import type { FetchLike } from "./api.js";
import type { SessionEvent } from "./types.js";

export interface SseMessage {
  id: string | null;
  event: string;
  data: string;
}

/** Incremental SSE wire-format parser. Feed chunks, collect messages. */
export class SseParser {
  private buffer = "";
  private id: string | null = null;
  private eventType = "";
  private dataLines: string[] = [];

  feed(chunk: string): SseMessage[] {
    this.buffer += chunk;
    const out: SseMessage[] = [];
    for (;;) {
      const nl = this.buffer.indexOf("\n");
      if (nl < 0) break;
      let line = this.buffer.slice(0, nl);
      this.buffer = this.buffer.slice(nl + 1);
      if (line.endsWith("\r")) line = line.slice(0, -1);
      const msg = this.takeLine(line);
      if (msg !== null) out.push(msg);
    }
    return out;
  }

  private takeLine(line: string): SseMessage | null {
    if (line === "") {
      // blank line dispatches; events without data are dropped per spec
      const ready = this.dataLines.length > 0;
      const msg: SseMessage | null = ready
        ? {
            id: this.id,
            event: this.eventType === "" ? "message" : this.eventType,
            data: this.dataLines.join("\n"),
          }
        : null;
      this.eventType = "";
      this.dataLines = [];
      return msg;
    }
    if (line.startsWith(":")) return null; // keep-alive comment
    const colon = line.indexOf(":");
    const field = colon < 0 ? line : line.slice(0, colon);
    let value = colon < 0 ? "" : line.slice(colon + 1);
    if (value.startsWith(" ")) value = value.slice(1);
    switch (field) {
      case "id":
        this.id = value;
        break;
      case "event":
        this.eventType = value;
        break;
      case "data":
        this.dataLines.push(value);
        break;
      default:
        break; // unknown fields are ignored per spec
    }
    return null;
  }
}

export type ConnectionState = "connecting" | "live" | "reconnecting" | "ended" | "closed";

export interface StreamCallbacks {
  onEvent(ev: SessionEvent): void;
  /** The service closed the stream deliberately: session over, log drained. */
  onEnd(): void;
  onState?(state: ConnectionState): void;
}

export interface StreamOptions {
  retryDelayMs?: number;
  fetchImpl?: FetchLike;
}

/**
 * Long-lived subscription to GET /events.
 *
 * Tracks the last seen sequence number and resumes from `last + 1` after a
 * dropped connection, so a flaky link never skips or duplicates an event.
 */
export class EventStream {
  private readonly urlFor: (cursor: number) => string;
  private readonly cb: StreamCallbacks;
  private readonly retryDelayMs: number;
  private readonly fetchImpl: FetchLike;
  private control: AbortController | null = null;
  private running = false;
  private nextCursor = 0;

  constructor(urlFor: (cursor: number) => string, cb: StreamCallbacks, opts: StreamOptions = {}) {
    this.urlFor = urlFor;
    this.cb = cb;
    this.retryDelayMs = opts.retryDelayMs ?? 1_000;
    this.fetchImpl = opts.fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  /** Next cursor a reconnect would request. */
  get cursor(): number {
    return this.nextCursor;
  }

  start(cursor = 0): void {
    if (this.running) return;
    this.running = true;
    this.nextCursor = cursor;
    void this.loop();
  }

  stop(): void {
    this.running = false;
    this.control?.abort();
    this.control = null;
    this.cb.onState?.("closed");
  }

  private async loop(): Promise<void> {
    let first = true;
    while (this.running) {
      if (!first) {
        await new Promise((r) => setTimeout(r, this.retryDelayMs));
        if (!this.running) return;
      }
      this.cb.onState?.(first ? "connecting" : "reconnecting");
      first = false;
      try {
        const ended = await this.readOnce();
        if (ended) {
          this.running = false;
          this.control = null;
          this.cb.onState?.("ended");
          this.cb.onEnd();
          return;
        }
      } catch {
        // fall through to reconnect; stop() aborts land here too
      }
    }
  }

  /** One connection lifetime. True when the service sent the end marker. */
  private async readOnce(): Promise<boolean> {
    this.control = new AbortController();
    const res = await this.fetchImpl(this.urlFor(this.nextCursor), {
      signal: this.control.signal,
    });
    if (!res.ok || res.body === null) {
      throw new Error(`event stream refused: ${res.status}`);
    }
    this.cb.onState?.("live");
    const reader = res.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    for (;;) {
      const { value, done } = await reader.read();
      if (done) return false; // dropped without the end marker
      for (const msg of parser.feed(decoder.decode(value, { stream: true }))) {
        if (msg.event === "end") return true;
        const ev = JSON.parse(msg.data) as SessionEvent;
        this.nextCursor = ev.seq + 1;
        this.cb.onEvent(ev);
      }
    }
  }
}

/**
 * Shapes of the review-service payloads this client consumes.
 *
 * The service (docs/protocol.md in the repository root) is the only backend:
 * five GET endpoints describe the session and one POST records a decision.
 * Everything here mirrors those JSON bodies field for field.
 */

export interface SeedRename {
  file_path: string;
  line_number: number;
  identifier_type: string;
  old_name: string;
  new_name: string;
}

export interface SessionCounters {
  llm_calls: number;
  tool_calls: number;
  files_inspected: number;
  suggestions_offered: number;
  accepted: number;
  rejected: number;
  actions: number;
}

export type SessionStatus = "running" | "finished" | "aborted" | "failed";

export interface SessionReport {
  status: SessionStatus;
  seed: SeedRename;
  config: Record<string, unknown>;
  error: string | null;
  // present once the session thread has started
  applied?: number;
  comment_edits?: number;
  suggestions?: number;
  events?: number;
  model_version?: number;
  counters?: SessionCounters;
}

export interface GuardAtom {
  kind: string;
  value: string;
}

export interface Guard {
  atoms: GuardAtom[];
}

export interface NamePattern {
  old_fragment: string[];
  new_fragment: string[];
}

/** One `scope_updated` payload; `trigger` lists the rejections behind it. */
export interface ScopeRevision {
  pattern: NamePattern;
  guards: Guard[];
  revision: number;
  trigger: TriggerRejection[];
}

export interface TriggerRejection {
  file: string;
  line: number;
  kind: string;
  old_name: string;
  new_name: string;
}

export interface ScopeReport {
  declared: boolean;
  summary?: string;
  pattern?: NamePattern;
  guards?: Guard[];
  revision?: number;
  history: ScopeRevision[];
}

export interface Suggestion {
  id: string;
  file: string;
  line: number;
  kind: string;
  old_name: string;
  new_name: string;
  pattern_mismatch: boolean;
  context_start: number;
  context: string[];
  highlight_start: number;
  highlight_end: number;
  decision: number | null;
}

export interface SuggestionsReport {
  pending: string[];
  suggestions: Suggestion[];
}

export interface FileDiff {
  path: string;
  diff: string;
}

export interface CommentEdit {
  file: string;
  line: number;
  before: string;
  after: string;
  old_name: string;
  new_name: string;
}

export interface ChangesReport {
  files: FileDiff[];
  applied: SeedRename[];
  comment_edits: CommentEdit[];
}

export interface SessionEvent {
  seq: number;
  ts: number;
  type: string;
  payload: Record<string, unknown>;
}

/** Outcome of POST /suggestions/{id}/decision, split by status code. */
export type DecisionOutcome =
  | { kind: "recorded" }
  | { kind: "already_decided" } // 409
  | { kind: "session_over" } // 410
  | { kind: "unknown_suggestion" } // 404
  | { kind: "invalid" }; // 422

"""Feedback providers: where the accept/reject bit comes from.

A provider sees one suggestion at a time and answers 1 (accept) or 0
(reject). The orchestrator does not care whether the answer came from a
blocking human, a gold file, or a script; it only consumes the bit.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

from .minilang import CodeModel, Declaration


class SessionAborted(Exception):
    """Raised inside a blocked decide() when the session is torn down."""


@dataclass(frozen=True)
class GoldRename:
    file: str
    line: int
    kind: str
    old_name: str
    new_name: str

    def key(self) -> tuple[str, int, str, str]:
        return (self.file, self.line, self.kind, self.old_name)

    def as_dict(self) -> dict:
        return {
            "file_path": self.file,
            "old_name": self.old_name,
            "new_name": self.new_name,
            "line_number": self.line,
            "identifier_type": self.kind,
        }


class GoldSet:
    """The reference rename set a session is judged against.

    File format: {"id": ..., "fixture": ..., "renames": [five-tuple dicts]},
    each rename keyed exactly like RenameRefactoring.as_dict().
    """

    def __init__(self, entries, set_id: str | None = None, fixture: str | None = None):
        self.entries: tuple[GoldRename, ...] = tuple(entries)
        self.set_id = set_id
        self.fixture = fixture
        self._by_key = {e.key(): e for e in self.entries}
        if len(self._by_key) != len(self.entries):
            raise ValueError("duplicate gold entry")

    @classmethod
    def from_dicts(cls, rows, set_id=None, fixture=None) -> "GoldSet":
        return cls(
            (
                GoldRename(
                    r["file_path"],
                    r["line_number"],
                    r["identifier_type"],
                    r["old_name"],
                    r["new_name"],
                )
                for r in rows
            ),
            set_id=set_id,
            fixture=fixture,
        )

    @classmethod
    def from_json(cls, path: str) -> "GoldSet":
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        if not isinstance(raw, dict) or "renames" not in raw:
            raise ValueError(f"{path}: expected an object with a 'renames' list")
        return cls.from_dicts(raw["renames"], raw.get("id"), raw.get("fixture"))

    def lookup(self, key) -> GoldRename | None:
        return self._by_key.get(key)

    def without(self, key) -> "GoldSet":
        return GoldSet(e for e in self.entries if e.key() != key)

    def keys(self) -> set:
        return set(self._by_key)

    def __len__(self) -> int:
        return len(self.entries)


def canonical_decl_key(model: CodeModel, decl: Declaration) -> tuple[str, int, str, str]:
    """Stable identity for scoring: methods collapse to their override group.

    The group representative is the member with the smallest (file, line,
    span), so the same key comes out no matter which member was named.
    """
    if decl.kind != "method":
        return (decl.file, decl.line, decl.kind, decl.name)
    group = [model.decl(m) for m in model.override_group(decl.id)]
    head = min(group, key=lambda d: (d.file, d.line, d.span[0]))
    return (head.file, head.line, head.kind, head.name)


class AutoAcceptFeedback:
    """Accepts everything; the upper bound of what the scope admits."""

    def decide(self, suggestion, decl: Declaration, model: CodeModel) -> int:
        return 1


class OracleFeedback:
    """Answers from a gold set, the stand-in for a perfectly informed human."""

    def __init__(self, gold: GoldSet):
        self.gold = gold

    def decide(self, suggestion, decl: Declaration, model: CodeModel) -> int:
        entry = self.gold.lookup(canonical_decl_key(model, decl))
        if entry is None:
            return 0
        return 1 if entry.new_name == suggestion.new_name else 0


class ScriptedFeedback:
    """Fixed decisions for tests: in offer order, or keyed by identity."""

    def __init__(self, decisions):
        if isinstance(decisions, dict):
            self._by_key = dict(decisions)
            self._queue = None
        else:
            self._by_key = None
            self._queue = list(decisions)

    def decide(self, suggestion, decl: Declaration, model: CodeModel) -> int:
        if self._queue is not None:
            if not self._queue:
                raise LookupError("scripted feedback exhausted")
            return self._queue.pop(0)
        key = (suggestion.file, suggestion.line, suggestion.kind, suggestion.old_name)
        if key not in self._by_key:
            raise LookupError(f"no scripted decision for {key}")
        return self._by_key[key]


@dataclass
class PendingDecision:
    suggestion: object
    decl: Declaration
    decision: int | None = None
    resolved: threading.Event = field(default_factory=threading.Event)


class InteractiveFeedback:
    """Blocks the session thread until someone posts a decision.

    The service exposes the pending suggestion over HTTP; post_decision()
    releases the waiter. abort() releases everyone with SessionAborted.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._pending: dict[str, PendingDecision] = {}
        self._aborted = False

    def decide(self, suggestion, decl: Declaration, model: CodeModel) -> int:
        with self._lock:
            if self._aborted:
                raise SessionAborted()
            entry = PendingDecision(suggestion, decl)
            self._pending[suggestion.id] = entry
        entry.resolved.wait()
        with self._lock:
            del self._pending[suggestion.id]
            if entry.decision is None:
                raise SessionAborted()
            return entry.decision

    def pending(self) -> list:
        with self._lock:
            return [p.suggestion for p in self._pending.values()]

    def post_decision(self, suggestion_id: str, decision: int) -> str:
        """Returns ok | unknown | aborted."""
        with self._lock:
            if self._aborted:
                return "aborted"
            entry = self._pending.get(suggestion_id)
            if entry is None or entry.resolved.is_set():
                return "unknown"
            entry.decision = decision
            entry.resolved.set()
            return "ok"

    def abort(self):
        with self._lock:
            self._aborted = True
            for entry in self._pending.values():
                entry.resolved.set()


def make_feedback(mode: str, gold: GoldSet | None = None):
    if mode == "auto_accept":
        return AutoAcceptFeedback()
    if mode == "oracle":
        if gold is None:
            raise ValueError("oracle feedback requires a gold set")
        return OracleFeedback(gold)
    if mode == "interactive":
        return InteractiveFeedback()
    raise ValueError(f"unknown feedback mode {mode!r}")

"""Append-only session event log.

Every observable step of a session is an event; the log is the audit trail,
the replay input, and the feed the review UI streams. With the logical clock
(the default outside interactive runs) timestamps equal sequence numbers, so
two runs of the same session serialize to byte-identical JSONL.
"""
from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass

EVENT_TYPES = (
    "session_started",
    "scope_updated",
    "plan_started",
    "suggestion_offered",
    "decision_recorded",
    "rename_applied",
    "apply_failed",
    "comment_updated",
    "file_done",
    "discovery_completed",
    "files_enqueued",
    "session_finished",
)


@dataclass(frozen=True)
class Event:
    seq: int
    ts: float
    type: str
    payload: dict

    def as_dict(self) -> dict:
        return {"seq": self.seq, "ts": self.ts, "type": self.type, "payload": self.payload}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))


class EventLog:
    """Thread-safe ordered event sink with cursor-based waiting."""

    def __init__(self, logical_clock: bool = True):
        self.logical_clock = logical_clock
        self._events: list[Event] = []
        self._lock = threading.Lock()
        self._changed = threading.Condition(self._lock)

    def append(self, type: str, **payload) -> Event:
        if type not in EVENT_TYPES:
            raise ValueError(f"unknown event type {type!r}")
        with self._changed:
            seq = len(self._events)
            ts = float(seq) if self.logical_clock else time.time()
            event = Event(seq, ts, type, payload)
            self._events.append(event)
            self._changed.notify_all()
            return event

    def __len__(self) -> int:
        with self._lock:
            return len(self._events)

    def snapshot(self, cursor: int = 0) -> list[Event]:
        with self._lock:
            return self._events[cursor:]

    def wait_beyond(self, cursor: int, timeout: float) -> list[Event]:
        """Events past the cursor, blocking up to timeout when none exist."""
        deadline = time.monotonic() + timeout
        with self._changed:
            while len(self._events) <= cursor:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return []
                self._changed.wait(remaining)
            return self._events[cursor:]

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.snapshot())


def events_from_jsonl(text: str) -> list[Event]:
    events = []
    for line in text.splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        events.append(Event(raw["seq"], raw["ts"], raw["type"], raw["payload"]))
    return events

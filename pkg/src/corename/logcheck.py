"""Event-log conformance checking.

A session's event log must follow the protocol grammar: seed first, scope
next, then strictly alternating plan/file blocks with well-formed suggestion
lifecycles, scope revisions that only ever grow by one, FIFO queue
discipline, and budget caps respected. validate_events returns human-readable
violations; an empty list means the log is conformant.
"""
from __future__ import annotations

from collections import deque

from .events import Event


def validate_events(events: list[Event]) -> list[str]:
    problems: list[str] = []

    def bad(seq, message):
        problems.append(f"event {seq}: {message}")

    if not events:
        return ["empty log"]
    if events[0].type != "session_started":
        bad(0, "log must open with session_started")
        return problems
    if events[-1].type != "session_finished":
        bad(events[-1].seq, "log must close with session_finished")
    if sum(1 for e in events if e.type == "session_started") != 1:
        problems.append("session_started must appear exactly once")
    if sum(1 for e in events if e.type == "session_finished") != 1:
        problems.append("session_finished must appear exactly once")

    started = events[0].payload
    config = started.get("config", {})
    seed = started.get("seed", {})
    plan_cap = config.get("file_plan_cap", 50)
    iteration_cap = config.get("per_file_iteration_cap", 3)
    rounds_cap = config.get("discovery_rounds_cap", 3)

    last_ts = None
    for index, e in enumerate(events):
        if e.seq != index:
            bad(e.seq, f"sequence number {e.seq} at position {index}")
        if last_ts is not None and e.ts < last_ts:
            bad(e.seq, "timestamp went backwards")
        last_ts = e.ts

    # seed phase: rename_applied(seed) then its synthetic acceptance; a
    # pre-applied seed skips the apply and opens with the decision directly
    pre_applied = bool(config.get("seed_pre_applied"))
    if len(events) < 3:
        problems.append("log too short for a seed phase")
        return problems
    decision_at = 1 if pre_applied else 2
    if not pre_applied:
        if events[1].type != "rename_applied" or not events[1].payload.get("seed"):
            bad(1, "second event must be the applied seed rename")
        elif events[1].payload.get("rename") != seed:
            bad(1, "applied seed differs from session_started seed")
    decision_event = events[decision_at]
    if decision_event.type != "decision_recorded" or not decision_event.payload.get(
        "synthetic"
    ):
        bad(decision_at, "the seed must open with its synthetic decision")
    elif decision_event.payload.get("decision") != 1:
        bad(decision_at, "the synthetic seed decision must be an acceptance")
    synthetic = [e for e in events if e.type == "decision_recorded" and e.payload.get("synthetic")]
    if len(synthetic) != 1:
        problems.append("exactly one synthetic decision (the seed) is allowed")

    scope_revision = None
    open_plan: str | None = None
    plan_seen: set[str] = set()
    plan_counts: dict[str, int] = {}
    open_suggestion: str | None = None
    accepted_pending: str | None = None  # suggestion id awaiting apply outcome
    pending_discovery = False  # a files_enqueued may only follow its discovery
    pending_enqueued: list[str] = []
    fingerprints: dict[tuple, int] = {}
    plan_lines: set[tuple] = set()
    applied_keys: set[tuple] = set()
    file_done_rejections = False
    last_apply_file: str | None = None
    fruitful_rounds = 0
    expected_queue: deque[str] = deque([seed.get("file_path", "")])
    offered_ids: dict[str, dict] = {}
    rename_event_count = 0
    accepted_total = 0
    rejected_total = 0
    failed_count = 0
    comment_count = 0

    for e in events:
        p = e.payload
        if e.type == "scope_updated":
            if open_plan is not None:
                bad(e.seq, "scope may not change inside a file plan")
            revision = p.get("revision")
            if scope_revision is None:
                if revision != 0:
                    bad(e.seq, "first scope revision must be 0")
                if p.get("trigger"):
                    bad(e.seq, "the initial scope has no triggering rejection")
            else:
                if revision != scope_revision + 1:
                    bad(e.seq, f"scope revision jumped {scope_revision} -> {revision}")
                if not file_done_rejections:
                    bad(e.seq, "scope refined without a preceding rejection")
                if not p.get("trigger"):
                    bad(e.seq, "a refinement must name its triggering rejections")
            if len(p.get("guards", [])) != (revision or 0):
                bad(e.seq, "guard count must equal the scope revision")
            scope_revision = revision
            file_done_rejections = False
        elif e.type == "plan_started":
            if scope_revision is None:
                bad(e.seq, "plan started before the scope was declared")
            if open_plan is not None:
                bad(e.seq, "plan started while another plan is open")
            file = p.get("file")
            if file in plan_seen:
                bad(e.seq, f"file {file} planned twice")
            plan_seen.add(file)
            if expected_queue and expected_queue[0] == file:
                expected_queue.popleft()
            else:
                bad(e.seq, f"plan order breaks queue discipline at {file}")
            if len(plan_seen) > plan_cap:
                bad(e.seq, "file plan cap exceeded")
            open_plan = file
            plan_counts = {"offered": 0, "applied": 0, "rejected": 0}
            fingerprints = {}
            plan_lines = set()
            open_suggestion = None
            accepted_pending = None
            file_done_rejections = False
            pending_discovery = False
        elif e.type == "suggestion_offered":
            if open_plan is None:
                bad(e.seq, "suggestion offered outside a plan")
                continue
            if open_suggestion is not None:
                bad(e.seq, "suggestion offered while another is undecided")
            if accepted_pending is not None:
                bad(e.seq, "suggestion offered while an apply is pending")
            sid = p.get("suggestion_id")
            if sid in offered_ids:
                bad(e.seq, f"suggestion id {sid} reused")
            offered_ids[sid] = p
            if p.get("file") != open_plan:
                bad(e.seq, "suggestion file differs from the open plan")
            # Homonymous decls may share a batch, but a fingerprint seen in an
            # earlier iteration must never come back: that is the loop guard.
            fp = (p.get("old_name"), p.get("new_name"), p.get("kind"))
            iteration = p.get("iteration", 1)
            if fp in fingerprints and fingerprints[fp] < iteration:
                bad(e.seq, f"fingerprint {fp} resurfaced in a later iteration")
            fingerprints.setdefault(fp, iteration)
            spot = (p.get("line"), p.get("kind"), p.get("old_name"))
            if spot in plan_lines:
                bad(e.seq, f"declaration at {spot} offered twice in one plan")
            plan_lines.add(spot)
            if p.get("iteration", 1) > iteration_cap:
                bad(e.seq, "iteration exceeds the per-file cap")
            open_suggestion = sid
            plan_counts["offered"] += 1
        elif e.type == "decision_recorded":
            if p.get("synthetic"):
                continue
            if open_suggestion is None or p.get("suggestion_id") != open_suggestion:
                bad(e.seq, "decision does not match the open suggestion")
                continue
            if p.get("decision") not in (0, 1):
                bad(e.seq, "decision must be 0 or 1")
            if p.get("decision") == 1:
                accepted_pending = open_suggestion
                accepted_total += 1
            else:
                plan_counts["rejected"] += 1
                rejected_total += 1
                file_done_rejections = True
            open_suggestion = None
        elif e.type == "rename_applied":
            rename_event_count += 1
            rename = p.get("rename", {})
            key = (
                rename.get("file_path"),
                rename.get("line_number"),
                rename.get("identifier_type"),
                rename.get("old_name"),
            )
            if key in applied_keys:
                bad(e.seq, f"rename applied twice at {key}")
            applied_keys.add(key)
            last_apply_file = rename.get("file_path")
            if p.get("seed"):
                if pre_applied:
                    bad(e.seq, "a pre-applied seed must not be applied again")
                elif e.seq != 1:
                    bad(e.seq, "seed apply must be the second event")
                continue
            if accepted_pending is None or p.get("suggestion_id") != accepted_pending:
                bad(e.seq, "apply without a matching accepted decision")
            accepted_pending = None
            plan_counts["applied"] += 1
        elif e.type == "apply_failed":
            failed_count += 1
            if accepted_pending is None or p.get("suggestion_id") != accepted_pending:
                bad(e.seq, "apply_failed without a matching accepted decision")
            accepted_pending = None
        elif e.type == "comment_updated":
            comment_count += 1
            if p.get("file") != last_apply_file:
                bad(e.seq, "comment update in a file without a fresh apply")
        elif e.type == "file_done":
            if open_plan is None or p.get("file") != open_plan:
                bad(e.seq, "file_done does not match the open plan")
                open_plan = None
                continue
            if open_suggestion is not None:
                bad(e.seq, "file_done with an undecided suggestion")
            if accepted_pending is not None:
                bad(e.seq, "file_done with a pending apply")
            for field in ("offered", "applied", "rejected"):
                if p.get(field) != plan_counts[field]:
                    bad(
                        e.seq,
                        f"file_done reports {field}={p.get(field)}, "
                        f"observed {plan_counts[field]}",
                    )
            if p.get("iterations", 0) > iteration_cap:
                bad(e.seq, "file_done iterations exceed the cap")
            if p.get("rejected", 0) > 0:
                file_done_rejections = True
            open_plan = None
        elif e.type == "discovery_completed":
            if open_plan is not None:
                bad(e.seq, "discovery inside an open plan")
            if p.get("fruitful"):
                fruitful_rounds += 1
                if fruitful_rounds > rounds_cap:
                    bad(e.seq, "fruitful discovery rounds exceed the cap")
                if not p.get("enqueued"):
                    bad(e.seq, "fruitful discovery with nothing enqueued")
            elif p.get("enqueued"):
                bad(e.seq, "unfruitful discovery must enqueue nothing")
            pending_discovery = True
            pending_enqueued = list(p.get("enqueued", []))
        elif e.type == "files_enqueued":
            if not pending_discovery:
                bad(e.seq, "files_enqueued without a preceding discovery")
            elif p.get("files") != pending_enqueued:
                bad(e.seq, "files_enqueued differs from the discovery result")
            else:
                for file in p.get("files", []):
                    if file in plan_seen:
                        bad(e.seq, f"already planned file {file} re-enqueued")
                    expected_queue.append(file)
            pending_discovery = False
        elif e.type == "session_finished":
            if open_plan is not None:
                bad(e.seq, "session finished inside an open plan")
            if p.get("status") == "finished" and expected_queue:
                bad(e.seq, f"finished with unplanned queue entries {list(expected_queue)}")
            if p.get("applied") != rename_event_count:
                bad(e.seq, "session_finished applied count disagrees with the log")
            counters = p.get("counters") or {}
            recount = {
                "tool_calls": rename_event_count + failed_count + comment_count,
                "files_inspected": len(plan_seen),
                "suggestions_offered": len(offered_ids),
                "accepted": accepted_total,
                "rejected": rejected_total,
            }
            for key, value in recount.items():
                if counters.get(key) != value:
                    bad(
                        e.seq,
                        f"counter {key}={counters.get(key)} disagrees with "
                        f"the log ({value})",
                    )
            if counters.get("actions") != counters.get("llm_calls", 0) + counters.get(
                "tool_calls", 0
            ):
                bad(e.seq, "actions must equal llm_calls plus tool_calls")

    return problems


def validate_jsonl(text: str) -> list[str]:
    from .events import events_from_jsonl

    return validate_events(events_from_jsonl(text))

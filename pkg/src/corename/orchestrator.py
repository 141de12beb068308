"""Session orchestration: one seed rename in, a coordinated change set out.

The loop is deliberately simple. Accept the seed, declare the scope it
implies, then process a file queue: plan a file, collect verdicts, refine
the scope after any rejection, and let replication propose the next files.
The budget knobs (plan cap, per-file iterations, discovery rounds, tool
failures) bound every run; the event log records enough to replay it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .engine import (
    ChangeSet,
    InternalReparseFailure,
    PreconditionViolated,
    PreconditionViolation,
    RenameRefactoring,
    apply_rename,
    update_comment,
)
from .events import EventLog
from .execution import FileOutcome, SessionState, annotate_comments, run_file
from .feedback import GoldSet, SessionAborted, make_feedback
from .memory import ExampleMemory
from .minilang import CodeModel
from .reasoner import DeterministicReasoner, ExternalReasoner
from .replication import discover


FEEDBACK_MODES = ("oracle", "auto_accept", "interactive", "scripted")
REASONER_MODES = ("deterministic", "external")


@dataclass(frozen=True)
class SessionConfig:
    feedback_mode: str = "oracle"
    reasoner_mode: str = "deterministic"
    materialize: bool = False
    replication_enabled: bool = True
    # the developer already performed the seed rename in their editor; the
    # session logs the implicit acceptance instead of applying it again
    seed_pre_applied: bool = False
    file_plan_cap: int = 50
    per_file_iteration_cap: int = 3
    tool_failure_cap: int = 3
    discovery_rounds_cap: int = 3
    logical_clock: bool = True

    def __post_init__(self):
        if self.feedback_mode not in FEEDBACK_MODES:
            raise ValueError(f"unknown feedback mode {self.feedback_mode!r}")
        if self.reasoner_mode not in REASONER_MODES:
            raise ValueError(f"unknown reasoner mode {self.reasoner_mode!r}")
        for name in (
            "file_plan_cap",
            "per_file_iteration_cap",
            "tool_failure_cap",
            "discovery_rounds_cap",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    def as_dict(self) -> dict:
        return {
            "feedback_mode": self.feedback_mode,
            "reasoner_mode": self.reasoner_mode,
            "materialize": self.materialize,
            "replication_enabled": self.replication_enabled,
            "seed_pre_applied": self.seed_pre_applied,
            "file_plan_cap": self.file_plan_cap,
            "per_file_iteration_cap": self.per_file_iteration_cap,
            "tool_failure_cap": self.tool_failure_cap,
            "discovery_rounds_cap": self.discovery_rounds_cap,
            "logical_clock": self.logical_clock,
        }


class SeedRenameInvalid(Exception):
    def __init__(self, violations):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = tuple(violations)


@dataclass
class SessionResult:
    status: str  # finished | aborted
    seed: RenameRefactoring
    config: SessionConfig
    initial_model: CodeModel
    model: CodeModel
    scope: object
    changes: ChangeSet
    events: EventLog
    outcomes: list[FileOutcome]
    visited: list[str]
    discovery_rounds_used: int
    reasoner_degraded: bool
    counters: dict = field(default_factory=dict)
    suggestions: list = field(default_factory=list)
    memory: ExampleMemory | None = None

    def applied_renames(self) -> list[RenameRefactoring]:
        return list(self.changes.applied)


def build_reasoner(config: SessionConfig):
    if config.reasoner_mode == "deterministic":
        return DeterministicReasoner()
    if config.reasoner_mode == "external":
        return ExternalReasoner()
    raise ValueError(f"unknown reasoner mode {config.reasoner_mode!r}")


class CountingReasoner:
    """Transparent reasoner wrapper that counts invocations for the session
    counters (every role call is one reasoning step)."""

    def __init__(self, inner):
        self.inner = inner
        self.calls = 0

    @property
    def degraded(self) -> bool:
        return bool(getattr(self.inner, "degraded", False))

    def infer_scope(self, *args, **kwargs):
        self.calls += 1
        return self.inner.infer_scope(*args, **kwargs)

    def find_candidates(self, *args, **kwargs):
        self.calls += 1
        return self.inner.find_candidates(*args, **kwargs)

    def refine_guards(self, *args, **kwargs):
        self.calls += 1
        return self.inner.refine_guards(*args, **kwargs)

    def filter_file(self, *args, **kwargs):
        self.calls += 1
        return self.inner.filter_file(*args, **kwargs)


def session_counters(events_snapshot, llm_calls: int) -> dict:
    """Cost counters derived from the event log plus the reasoner call
    count. actions totals every reasoning step and engine mutation attempt."""
    by_type: dict[str, int] = {}
    accepted = rejected = 0
    for e in events_snapshot:
        by_type[e.type] = by_type.get(e.type, 0) + 1
        if e.type == "decision_recorded" and not e.payload.get("synthetic"):
            if e.payload.get("decision") == 1:
                accepted += 1
            else:
                rejected += 1
    tool_calls = (
        by_type.get("rename_applied", 0)
        + by_type.get("apply_failed", 0)
        + by_type.get("comment_updated", 0)
    )
    return {
        "llm_calls": llm_calls,
        "tool_calls": tool_calls,
        "files_inspected": by_type.get("plan_started", 0),
        "suggestions_offered": by_type.get("suggestion_offered", 0),
        "accepted": accepted,
        "rejected": rejected,
        "actions": llm_calls + tool_calls,
    }


def run_session(
    model: CodeModel,
    seed: RenameRefactoring,
    config: SessionConfig | None = None,
    feedback=None,
    reasoner=None,
    events: EventLog | None = None,
    gold: GoldSet | None = None,
    state_hook=None,
) -> SessionResult:
    """Run a full session. The caller may inject feedback/reasoner/events;
    otherwise they come from the config. state_hook, when given, receives
    the live SessionState before the seed lands (the service uses it to
    expose progress while the session thread runs)."""
    config = config or SessionConfig()
    events = events or EventLog(logical_clock=config.logical_clock)
    if feedback is None:
        feedback = make_feedback(config.feedback_mode, gold)
    if reasoner is None:
        reasoner = build_reasoner(config)
    reasoner = CountingReasoner(reasoner)

    state = SessionState(
        model=model,
        initial_model=model,
        scope=None,  # set right after the seed lands
        changes=ChangeSet(),
        memory=ExampleMemory(),
        events=events,
        feedback=feedback,
        reasoner=reasoner,
        config=config,
    )
    if state_hook is not None:
        state_hook(state)
    events.append(
        "session_started",
        seed=seed.as_dict(),
        config=config.as_dict(),
        files=len(model.layout.files),
        declarations=len(model.declarations),
    )

    # The seed is accepted by definition: it is the human's own edit. It
    # lands before anything else so scope inference starts from real state.
    if config.seed_pre_applied:
        # the editor already performed the rename; the text must show it
        seed_decl = next(
            (
                d
                for d in state.model.decls_in_file(seed.file_path)
                if d.line == seed.line_number
                and d.kind == seed.identifier_type
                and d.name == seed.new_name
            ),
            None,
        )
        if seed_decl is None:
            violation = PreconditionViolation(
                "unresolved_target",
                f"no {seed.identifier_type} named {seed.new_name!r} at "
                f"{seed.file_path}:{seed.line_number}",
                seed.file_path,
                seed.line_number,
            )
            raise SeedRenameInvalid((violation,))
        state.accepted_decls.append(seed_decl)
    else:
        try:
            new_model, delta = apply_rename(state.model, seed)
        except PreconditionViolated as exc:
            raise SeedRenameInvalid(exc.violations) from exc
        except InternalReparseFailure as exc:
            violation = PreconditionViolation(
                "unresolved_target", str(exc), seed.file_path, seed.line_number
            )
            raise SeedRenameInvalid((violation,)) from exc
        state.install_model(new_model)
        state.changes.record_apply(seed, new_model.version, delta.edited_files)
        state.accepted_decls.append(delta.decl)
        events.append(
            "rename_applied",
            rename=seed.as_dict(),
            edited_files=list(delta.edited_files),
            group_size=len(delta.group),
            edit_count=delta.edit_count,
            version=delta.new_version,
            seed=True,
            suggestion_id=None,
        )
    events.append(
        "decision_recorded", suggestion_id=None, decision=1, synthetic=True
    )
    state.memory.record(seed, 1)
    if not config.seed_pre_applied:
        annotate_comments(state, seed.file_path, seed.old_name, seed.new_name)

    state.scope = reasoner.infer_scope(state.model, seed)
    events.append("scope_updated", trigger=[], **state.scope.as_dict())

    queue: list[str] = [seed.file_path]
    visited: list[str] = [seed.file_path]
    accepted_names: list[str] = [seed.old_name]
    rounds_used = 0
    outcomes: list[FileOutcome] = []
    status = "finished"

    try:
        while queue:
            file = queue.pop(0)
            events.append(
                "plan_started", file=file, position=len(outcomes) + 1, queued=list(queue)
            )
            outcome = run_file(state, file)
            outcomes.append(outcome)
            accepted_names.extend(r.old_name for r in outcome.applied)
            events.append(
                "file_done",
                file=file,
                termination=outcome.termination,
                iterations=outcome.iterations,
                offered=len(outcome.offered),
                applied=len(outcome.applied),
                rejected=len(outcome.rejected),
                dropped=len(outcome.dropped),
                tool_failures=outcome.tool_failures,
            )
            if outcome.rejected:
                state.scope = reasoner.refine_guards(
                    state.model,
                    state.scope,
                    [decl for _, decl in outcome.rejected],
                    list(state.accepted_decls),
                )
                trigger = [
                    {
                        "suggestion_id": s.id,
                        "file": s.file,
                        "line": s.line,
                        "kind": s.kind,
                        "old_name": s.old_name,
                        "new_name": s.new_name,
                    }
                    for s in outcome.offered
                    if s.decision == 0
                ]
                events.append(
                    "scope_updated", trigger=trigger, **state.scope.as_dict()
                )
            if config.replication_enabled and rounds_used < config.discovery_rounds_cap:
                capacity = config.file_plan_cap - len(visited)
                # the seed counts among the renames applied in its own file
                plan_applied = (
                    [seed] if file == seed.file_path else []
                ) + outcome.applied
                modified = sorted(
                    set(state.changes.modified_files()) | {seed.file_path}
                )
                result = discover(
                    state.model,
                    state.scope,
                    reasoner,
                    set(visited) | set(queue),
                    modified,
                    plan_applied,
                    accepted_names,
                    capacity,
                )
                if result.fruitful:
                    rounds_used += 1
                events.append(
                    "discovery_completed",
                    after_file=file,
                    structural=list(result.structural),
                    semantic=list(result.semantic),
                    enqueued=list(result.enqueued),
                    fruitful=result.fruitful,
                    rounds_used=rounds_used,
                )
                if result.enqueued:
                    queue.extend(result.enqueued)
                    visited.extend(result.enqueued)
                    events.append("files_enqueued", files=list(result.enqueued))
    except SessionAborted:
        status = "aborted"

    counters = session_counters(events.snapshot(), reasoner.calls)
    events.append(
        "session_finished",
        status=status,
        applied=len(state.changes.applied),
        comment_edits=len(state.changes.comment_edits),
        files_visited=len(visited),
        scope_revision=state.scope.revision,
        discovery_rounds=rounds_used,
        reasoner_degraded=reasoner.degraded,
        counters=counters,
    )
    return SessionResult(
        status=status,
        seed=seed,
        config=config,
        initial_model=state.initial_model,
        model=state.model,
        scope=state.scope,
        changes=state.changes,
        events=events,
        outcomes=outcomes,
        visited=visited,
        discovery_rounds_used=rounds_used,
        reasoner_degraded=reasoner.degraded,
        counters=counters,
        suggestions=state.suggestions,
        memory=state.memory,
    )


def replay_changes(initial_model: CodeModel, changes: ChangeSet) -> CodeModel:
    """Re-apply a change set from scratch; the result must equal the final
    session model text-for-text.

    Renames only touch code spans and comment edits only touch comments, and
    distinct whole-token replacements commute, so renames-then-comments in
    recorded order reproduces the interleaved original.
    """
    model = initial_model
    for rename in changes.applied:
        model, _ = apply_rename(model, rename)
    done = set()
    for edit in changes.comment_edits:
        key = (edit.file, edit.old_name, edit.new_name)
        if key in done:
            continue
        done.add(key)
        model, _ = update_comment(model, edit.file, edit.old_name, edit.new_name)
    return model

"""Per-file execution: offer, decide, apply, annotate.

One run_file call drains one file: the reasoner proposes, validation
grounds the proposals, the human (or a stand-in) votes, and accepted
renames land immediately so later suggestions see the updated code. The
loop stops on its own when a pass yields nothing, when every proposal was
already offered here, when the iteration budget runs out, or when applies
keep failing.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .engine import (
    ChangeSet,
    InternalReparseFailure,
    PreconditionViolated,
    apply_rename,
    resolve_identifier,
    update_comment,
    write_layout_changes,
)
from .events import EventLog
from .memory import ExampleMemory
from .minilang import CodeModel, Declaration
from .reasoner import DroppedProposal, validate_proposals
from .scope import DeclaredScope

CONTEXT_RADIUS = 5  # lines shown around a suggestion


@dataclass
class Suggestion:
    id: str
    file: str
    line: int
    kind: str
    old_name: str
    new_name: str
    pattern_mismatch: bool
    context_start: int
    context: tuple[str, ...]
    highlight_start: int  # column range of the name on its line
    highlight_end: int
    decision: int | None = None

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "file": self.file,
            "line": self.line,
            "kind": self.kind,
            "old_name": self.old_name,
            "new_name": self.new_name,
            "pattern_mismatch": self.pattern_mismatch,
            "context_start": self.context_start,
            "context": list(self.context),
            "highlight_start": self.highlight_start,
            "highlight_end": self.highlight_end,
            "decision": self.decision,
        }


@dataclass
class SessionState:
    """Mutable session spine shared by the orchestrator and file loops."""

    model: CodeModel
    initial_model: CodeModel
    scope: DeclaredScope
    changes: ChangeSet
    memory: ExampleMemory
    events: EventLog
    feedback: object
    reasoner: object
    config: object
    accepted_decls: list[Declaration] = field(default_factory=list)
    rejected_decls: list[Declaration] = field(default_factory=list)
    suggestions: list[Suggestion] = field(default_factory=list)
    suggestion_seq: int = 0

    def next_suggestion_id(self) -> str:
        sid = str(self.suggestion_seq)
        self.suggestion_seq += 1
        return sid

    def install_model(self, new_model: CodeModel):
        if getattr(self.config, "materialize", False):
            write_layout_changes(self.model.layout, new_model.layout)
        self.model = new_model


@dataclass
class FileOutcome:
    file: str
    iterations: int = 0
    termination: str = ""
    offered: list[Suggestion] = field(default_factory=list)
    applied: list = field(default_factory=list)  # RenameRefactoring
    applied_decls: list[Declaration] = field(default_factory=list)
    rejected: list[tuple] = field(default_factory=list)  # (rename, decl)
    dropped: list[DroppedProposal] = field(default_factory=list)
    tool_failures: int = 0


def _refresh_decl(model: CodeModel, file: str, rename) -> Declaration | None:
    """Current-model snapshot of the declaration a validated rename targets.

    Earlier applies in the same batch shift character offsets, so the decl
    captured at validation time may carry a dead position-based id. Line
    numbers survive renames, so (file, line, kind, name) still pins it.
    """
    for d in resolve_identifier(
        model, rename.old_name, file, rename.line_number, rename.identifier_type
    ):
        if (
            d.file == file
            and d.line == rename.line_number
            and d.kind == rename.identifier_type
        ):
            return d
    return None


def _context_lines(model: CodeModel, file: str, line: int) -> tuple[int, tuple[str, ...]]:
    source = model.layout.file(file)
    first = max(1, line - CONTEXT_RADIUS)
    last = min(source.line_count(), line + CONTEXT_RADIUS)
    return first, tuple(source.line_text(n) for n in range(first, last + 1))


def run_file(state: SessionState, file: str) -> FileOutcome:
    """Drain one file. Raises SessionAborted out of a blocked decision."""
    outcome = FileOutcome(file=file)
    offered_fingerprints: set[tuple[str, str, str]] = set()
    iteration_cap = state.config.per_file_iteration_cap
    failure_cap = state.config.tool_failure_cap

    while True:
        if outcome.iterations >= iteration_cap:
            outcome.termination = "iteration_cap"
            break
        outcome.iterations += 1
        proposals = state.reasoner.find_candidates(
            state.model, file, state.scope, state.memory.shots()
        )
        valid, dropped = validate_proposals(state.model, file, state.scope, proposals)
        outcome.dropped.extend(dropped)
        if not valid:
            outcome.termination = "empty_result"
            break
        fresh = [
            c
            for c in valid
            if (c.rename.old_name, c.rename.new_name, c.rename.identifier_type)
            not in offered_fingerprints
        ]
        if not fresh:
            outcome.termination = "no_new_fingerprints"
            break
        fresh.sort(key=lambda c: (c.decl.line, c.decl.span[0]))
        for candidate in fresh:
            rename = candidate.rename
            offered_fingerprints.add(
                (rename.old_name, rename.new_name, rename.identifier_type)
            )
            decl = _refresh_decl(state.model, file, rename) or candidate.decl
            start, context = _context_lines(state.model, file, rename.line_number)
            line_start = state.model.layout.file(file).line_offsets()[
                rename.line_number - 1
            ]
            suggestion = Suggestion(
                id=state.next_suggestion_id(),
                file=file,
                line=rename.line_number,
                kind=rename.identifier_type,
                old_name=rename.old_name,
                new_name=rename.new_name,
                pattern_mismatch=candidate.pattern_mismatch,
                context_start=start,
                context=context,
                highlight_start=decl.span[0] - line_start,
                highlight_end=decl.span[1] - line_start,
            )
            state.suggestions.append(suggestion)
            outcome.offered.append(suggestion)
            state.events.append(
                "suggestion_offered",
                suggestion_id=suggestion.id,
                file=file,
                line=rename.line_number,
                kind=rename.identifier_type,
                old_name=rename.old_name,
                new_name=rename.new_name,
                pattern_mismatch=candidate.pattern_mismatch,
                iteration=outcome.iterations,
                context_start=start,
                context=list(context),
                highlight_start=suggestion.highlight_start,
                highlight_end=suggestion.highlight_end,
            )
            decision = state.feedback.decide(suggestion, decl, state.model)
            suggestion.decision = decision
            state.events.append(
                "decision_recorded",
                suggestion_id=suggestion.id,
                decision=decision,
                synthetic=False,
            )
            state.memory.record(rename, decision)
            if decision != 1:
                outcome.rejected.append((rename, decl))
                state.rejected_decls.append(decl)
                continue
            try:
                new_model, delta = apply_rename(state.model, rename)
            except (PreconditionViolated, InternalReparseFailure) as exc:
                outcome.tool_failures += 1
                state.events.append(
                    "apply_failed",
                    suggestion_id=suggestion.id,
                    rename=rename.as_dict(),
                    reason=str(exc),
                    tool_failures=outcome.tool_failures,
                )
                if outcome.tool_failures >= failure_cap:
                    outcome.termination = "tool_failures"
                    return outcome
                continue
            state.install_model(new_model)
            state.changes.record_apply(rename, new_model.version, delta.edited_files)
            state.accepted_decls.append(delta.decl)
            outcome.applied.append(rename)
            outcome.applied_decls.append(delta.decl)
            state.events.append(
                "rename_applied",
                rename=rename.as_dict(),
                edited_files=list(delta.edited_files),
                group_size=len(delta.group),
                edit_count=delta.edit_count,
                version=delta.new_version,
                seed=False,
                suggestion_id=suggestion.id,
            )
            annotate_comments(state, file, rename.old_name, rename.new_name)
    return outcome


def annotate_comments(state: SessionState, file: str, old_name: str, new_name: str):
    """Best-effort comment refresh in one file after an applied rename."""
    new_model, edits = update_comment(state.model, file, old_name, new_name)
    if not edits:
        return
    state.install_model(new_model)
    state.changes.record_comment_edits(edits, new_model.version)
    state.events.append(
        "comment_updated",
        file=file,
        old_name=old_name,
        new_name=new_name,
        lines=[e.line for e in edits],
        version=new_model.version,
    )

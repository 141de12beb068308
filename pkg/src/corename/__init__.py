"""corename: human-in-the-loop coordinated rename sessions for MiniLang.

A seed rename plus per-suggestion human verdicts drive a session that
renames a whole vocabulary across a project: scope inference from the seed,
per-file suggestion batches, guard refinement on rejection, and replication
to structurally or lexically related files.
"""
from .bench import (
    BenchCase,
    Metrics,
    run_case,
    run_suite,
    score,
    score_session,
    select_seed,
)
from .engine import (
    ChangeSet,
    CommentEdit,
    InternalReparseFailure,
    PreconditionViolated,
    PreconditionViolation,
    RenameRefactoring,
    apply_rename,
    check_preconditions,
    resolve_identifier,
    update_comment,
)
from .events import Event, EventLog, events_from_jsonl
from .execution import FileOutcome, Suggestion
from .feedback import (
    AutoAcceptFeedback,
    GoldRename,
    GoldSet,
    InteractiveFeedback,
    OracleFeedback,
    ScriptedFeedback,
    SessionAborted,
)
from .logcheck import validate_events, validate_jsonl
from .memory import ExampleMemory, LabeledExample
from .naming import apply_tokens, extract_fragments
from .orchestrator import (
    SeedRenameInvalid,
    SessionConfig,
    SessionResult,
    replay_changes,
    run_session,
    session_counters,
)
from .projgen import GeneratedProject, generate_project
from .reasoner import (
    DeterministicReasoner,
    ExternalReasoner,
    RenameProposal,
    validate_proposals,
)
from .replication import discover, keyword_search, slice_files
from .scope import (
    DeclaredScope,
    Guard,
    GuardAtom,
    NamePattern,
    infer_from_seed,
    refine,
    scope_domain,
)

__version__ = "0.1.0"

__all__ = [
    "AutoAcceptFeedback",
    "BenchCase",
    "ChangeSet",
    "CommentEdit",
    "DeclaredScope",
    "DeterministicReasoner",
    "Event",
    "EventLog",
    "ExampleMemory",
    "ExternalReasoner",
    "FileOutcome",
    "GeneratedProject",
    "GoldRename",
    "GoldSet",
    "Guard",
    "GuardAtom",
    "InteractiveFeedback",
    "InternalReparseFailure",
    "LabeledExample",
    "Metrics",
    "NamePattern",
    "OracleFeedback",
    "PreconditionViolated",
    "PreconditionViolation",
    "RenameProposal",
    "RenameRefactoring",
    "ScriptedFeedback",
    "SeedRenameInvalid",
    "SessionAborted",
    "SessionConfig",
    "SessionResult",
    "Suggestion",
    "apply_rename",
    "apply_tokens",
    "check_preconditions",
    "discover",
    "events_from_jsonl",
    "extract_fragments",
    "generate_project",
    "infer_from_seed",
    "keyword_search",
    "refine",
    "replay_changes",
    "resolve_identifier",
    "run_case",
    "run_session",
    "run_suite",
    "scope_domain",
    "score",
    "score_session",
    "select_seed",
    "session_counters",
    "slice_files",
    "update_comment",
    "validate_events",
    "validate_jsonl",
    "validate_proposals",
]

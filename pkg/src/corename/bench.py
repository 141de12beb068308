"""Benchmarking: score sessions against gold rename sets.

Scoring is pure set algebra over exact keys, computed with Fractions so
reported numbers are never floating-point artifacts. The seed never counts:
it is the human's own edit, so it is removed from both the applied set and
the gold set before comparison. Methods are normalized to their override
group representative first, so naming any member of a group counts as the
same rename.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, replace
from fractions import Fraction

from .engine import RenameRefactoring
from .feedback import GoldSet, OracleFeedback, canonical_decl_key
from .minilang import CodeModel, build_model, load_layout
from .orchestrator import SessionConfig, SessionResult, run_session

ScoreKey = tuple[str, int, str, str, str]  # file, line, kind, old, new

SEED_KIND_PRIORITY = ("class", "field", "method", "parameter", "local_variable")


def select_seed(gold: GoldSet) -> RenameRefactoring:
    """Protocol seed choice: highest-priority kind first, then the
    lexicographically first (file, line) among ties."""
    if not gold.entries:
        raise ValueError("cannot select a seed from an empty gold set")
    entry = min(
        gold.entries,
        key=lambda e: (SEED_KIND_PRIORITY.index(e.kind), e.file, e.line),
    )
    return RenameRefactoring(
        entry.file, entry.old_name, entry.new_name, entry.line, entry.kind
    )


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    fn: int
    precision: Fraction
    recall: Fraction
    f1: Fraction

    def as_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": float(self.precision),
            "recall": float(self.recall),
            "f1": float(self.f1),
            "precision_exact": str(self.precision),
            "recall_exact": str(self.recall),
            "f1_exact": str(self.f1),
        }


def score(applied: set, gold: set) -> Metrics:
    """Precision/recall/F1 over two key sets; empty denominators score 0."""
    tp = len(applied & gold)
    fp = len(applied - gold)
    fn = len(gold - applied)
    precision = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
    recall = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall
        else Fraction(0)
    )
    return Metrics(tp, fp, fn, precision, recall, f1)


def rename_score_key(model: CodeModel, rename: RenameRefactoring) -> ScoreKey:
    """Canonical scoring key of a rename, resolved against the given model
    (normally the pre-session model, where gold coordinates live)."""
    for d in model.decls_in_file(rename.file_path):
        if (
            d.name == rename.old_name
            and d.line == rename.line_number
            and d.kind == rename.identifier_type
        ):
            return canonical_decl_key(model, d) + (rename.new_name,)
    return (
        rename.file_path,
        rename.line_number,
        rename.identifier_type,
        rename.old_name,
        rename.new_name,
    )


def gold_score_keys(model: CodeModel, gold: GoldSet) -> set[ScoreKey]:
    keys = set()
    for entry in gold.entries:
        rename = RenameRefactoring(
            entry.file, entry.old_name, entry.new_name, entry.line, entry.kind
        )
        keys.add(rename_score_key(model, rename))
    return keys


def score_session(result: SessionResult, gold: GoldSet) -> dict:
    """Score one finished session: seed excluded, override groups collapsed."""
    model = result.initial_model
    seed_key = rename_score_key(model, result.seed)
    applied_keys = {
        rename_score_key(model, r) for r in result.changes.applied
    } - {seed_key}
    gold_keys = gold_score_keys(model, gold) - {seed_key}
    metrics = score(applied_keys, gold_keys)
    decisions = [
        e.payload["decision"]
        for e in result.events.snapshot()
        if e.type == "decision_recorded" and not e.payload.get("synthetic")
    ]
    acceptance = (
        Fraction(sum(decisions), len(decisions)) if decisions else Fraction(0)
    )
    return {
        "metrics": metrics,
        "acceptance_rate": acceptance,
        "decisions": len(decisions),
        "applied": len(applied_keys),
        "gold": len(gold_keys),
    }


@dataclass(frozen=True)
class BenchCase:
    name: str
    project_root: str
    source_dirs: tuple[str, ...]
    seed: RenameRefactoring
    gold: GoldSet

    @classmethod
    def from_json(cls, path: str) -> "BenchCase":
        base = os.path.dirname(os.path.abspath(path))
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        if not isinstance(raw, dict):
            raise ValueError(f"bench case {path} must hold a JSON object")
        gold = GoldSet.from_json(os.path.join(base, raw["gold"]))
        # an explicit seed overrides the protocol choice; most cases omit it
        seed = RenameRefactoring(**raw["seed"]) if "seed" in raw else select_seed(gold)
        return cls(
            name=raw["name"],
            project_root=os.path.join(base, raw["project"]),
            source_dirs=tuple(raw.get("source_dirs", ("src/main", "src/test"))),
            seed=seed,
            gold=gold,
        )


def run_case(case: BenchCase, config: SessionConfig | None = None) -> dict:
    config = config or SessionConfig(feedback_mode="oracle")
    if config.feedback_mode != "oracle":
        config = replace(config, feedback_mode="oracle")
    layout = load_layout(case.project_root, case.source_dirs)
    model = build_model(layout)
    started = time.perf_counter()
    result = run_session(
        model, case.seed, config, feedback=OracleFeedback(case.gold)
    )
    elapsed = time.perf_counter() - started
    scored = score_session(result, case.gold)
    metrics: Metrics = scored["metrics"]
    return {
        "name": case.name,
        "status": result.status,
        "seconds": elapsed,
        "files_visited": len(result.visited),
        "scope_revision": result.scope.revision,
        "discovery_rounds": result.discovery_rounds_used,
        "acceptance_rate": scored["acceptance_rate"],
        "decisions": scored["decisions"],
        "metrics": metrics,
        "result": result,
    }


def run_suite(cases: list[BenchCase], config: SessionConfig | None = None) -> dict:
    reports = [run_case(case, config) for case in cases]
    tp = sum(r["metrics"].tp for r in reports)
    fp = sum(r["metrics"].fp for r in reports)
    fn = sum(r["metrics"].fn for r in reports)
    micro = score(set(), set()) if not reports else Metrics(
        tp,
        fp,
        fn,
        Fraction(tp, tp + fp) if tp + fp else Fraction(0),
        Fraction(tp, tp + fn) if tp + fn else Fraction(0),
        Fraction(2 * tp, 2 * tp + fp + fn) if 2 * tp + fp + fn else Fraction(0),
    )
    return {"cases": reports, "micro": micro}


def report_as_dict(report: dict) -> dict:
    """JSON-friendly projection of a run_case / run_suite report."""
    if "cases" in report:
        return {
            "cases": [report_as_dict(c) for c in report["cases"]],
            "micro": report["micro"].as_dict(),
        }
    out = {k: v for k, v in report.items() if k != "result"}
    out["metrics"] = report["metrics"].as_dict()
    out["acceptance_rate"] = float(report["acceptance_rate"])
    return out

"""Recency memory of human verdicts, used as few-shot context.

The reasoner prompt has a fixed example budget, so the memory keeps every
labeled rename but serves only the most recent few per label. Recency wins
because late verdicts reflect the refined scope, not the naive one.
"""
from __future__ import annotations

from dataclasses import dataclass

from .engine import RenameRefactoring

POSITIVE_BUDGET = 4
NEGATIVE_BUDGET = 4


@dataclass(frozen=True)
class LabeledExample:
    rename: RenameRefactoring
    label: int  # 1 accepted, 0 rejected
    seq: int

    def as_dict(self) -> dict:
        return {"rename": self.rename.as_dict(), "label": self.label}


class ExampleMemory:
    def __init__(self):
        self._examples: list[LabeledExample] = []

    def record(self, rename: RenameRefactoring, label: int) -> LabeledExample:
        if label not in (0, 1):
            raise ValueError("label must be 0 or 1")
        example = LabeledExample(rename, label, len(self._examples))
        self._examples.append(example)
        return example

    def __len__(self) -> int:
        return len(self._examples)

    def examples(self) -> list[LabeledExample]:
        """Full decision history in arrival order."""
        return list(self._examples)

    def shots(self) -> list[LabeledExample]:
        """Budgeted few-shot selection, most recent first within each label."""
        positives = [e for e in reversed(self._examples) if e.label == 1]
        negatives = [e for e in reversed(self._examples) if e.label == 0]
        return positives[:POSITIVE_BUDGET] + negatives[:NEGATIVE_BUDGET]

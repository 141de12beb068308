"""Declared rename scopes: a name pattern plus exclusion guards.

The scope is the orchestrator's contract with the human: it says which
declarations are candidates (pattern) and which are carved out (guards).
Guards only ever grow; each refinement appends one and bumps the revision,
so revision k+1 admits a subset of revision k.
"""
from __future__ import annotations

import posixpath
import re
from dataclasses import dataclass

from .engine import RenameRefactoring
from .minilang import CodeModel, Declaration
from .naming import apply_tokens, extract_fragments


@dataclass(frozen=True)
class NamePattern:
    """Token-level rewrite rule, e.g. (join, hints) -> (query, hints)."""

    old_fragment: tuple[str, ...]
    new_fragment: tuple[str, ...]

    def rewrite(self, name: str) -> str | None:
        return apply_tokens(self.old_fragment, self.new_fragment, name)

    def matches(self, name: str) -> bool:
        return self.rewrite(name) is not None

    def describe(self) -> str:
        return f"{' '.join(self.old_fragment)} -> {' '.join(self.new_fragment)}"

    def as_dict(self) -> dict:
        return {
            "old_fragment": list(self.old_fragment),
            "new_fragment": list(self.new_fragment),
        }


# guard atom kinds, in the order the refinement search combines them
ATOM_KINDS = ("exclude_kind", "exclude_visibility", "exclude_name_regex", "restrict_dir")


@dataclass(frozen=True)
class GuardAtom:
    kind: str
    value: str

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown guard atom kind {self.kind!r}")

    def holds(self, decl: Declaration) -> bool:
        if self.kind == "exclude_kind":
            return decl.kind == self.value
        if self.kind == "exclude_visibility":
            return decl.visibility == self.value
        if self.kind == "exclude_name_regex":
            return re.fullmatch(self.value, decl.name) is not None
        # restrict_dir: holds (excludes) when the file lies outside the prefix
        prefix = self.value.rstrip("/") + "/"
        return not (decl.file + "/").startswith(prefix)

    def describe(self) -> str:
        if self.kind == "restrict_dir":
            return f"only under {self.value}"
        return f"{self.kind.removeprefix('exclude_')}={self.value}"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True)
class Guard:
    """Conjunction of atoms; excludes a declaration iff every atom holds."""

    atoms: tuple[GuardAtom, ...]

    def excludes(self, decl: Declaration) -> bool:
        return bool(self.atoms) and all(atom.holds(decl) for atom in self.atoms)

    def describe(self) -> str:
        return "exclude(" + " and ".join(a.describe() for a in self.atoms) + ")"

    def as_dict(self) -> dict:
        return {"atoms": [a.as_dict() for a in self.atoms]}


@dataclass(frozen=True)
class DeclaredScope:
    pattern: NamePattern
    guards: tuple[Guard, ...] = ()
    revision: int = 0

    def admits(self, decl: Declaration) -> bool:
        if not self.pattern.matches(decl.name):
            return False
        return not any(guard.excludes(decl) for guard in self.guards)

    def with_guard(self, guard: Guard) -> "DeclaredScope":
        return DeclaredScope(self.pattern, self.guards + (guard,), self.revision + 1)

    def describe(self) -> str:
        parts = [self.pattern.describe()]
        parts.extend(g.describe() for g in self.guards)
        return "; ".join(parts)

    def as_dict(self) -> dict:
        return {
            "pattern": self.pattern.as_dict(),
            "guards": [g.as_dict() for g in self.guards],
            "revision": self.revision,
        }


def infer_from_seed(seed: RenameRefactoring) -> DeclaredScope:
    """Initial scope (revision 0): the seed's token rewrite, no guards."""
    old_fragment, new_fragment = extract_fragments(seed.old_name, seed.new_name)
    return DeclaredScope(NamePattern(old_fragment, new_fragment))


def scope_domain(model: CodeModel, scope: DeclaredScope) -> list[Declaration]:
    """Every declaration the scope admits, ordered by (file, line, span)."""
    admitted = [d for d in model.declarations if scope.admits(d)]
    admitted.sort(key=lambda d: (d.file, d.line, d.span[0]))
    return admitted


def _common_dir(paths: list[str]) -> str | None:
    if not paths:
        return None
    split = [p.split("/")[:-1] for p in paths]  # drop the file name
    shortest = min(split, key=len)
    common: list[str] = []
    for i, part in enumerate(shortest):
        if all(parts[i] == part for parts in split):
            common.append(part)
        else:
            break
    if not common:
        return None
    return posixpath.join(*common)


def _candidate_guards(
    rejected: list[Declaration], accepted: list[Declaration]
) -> list[Guard]:
    """Refinement candidates, most specific first."""
    kinds = sorted({d.kind for d in rejected})
    # locals and parameters carry no visibility, so no visibility atom then
    visibilities = sorted({d.visibility for d in rejected if d.visibility is not None})
    if len(visibilities) != 1 or any(d.visibility is None for d in rejected):
        visibilities = []
    candidates: list[Guard] = []
    if len(kinds) == 1 and len(visibilities) == 1:
        candidates.append(
            Guard(
                (
                    GuardAtom("exclude_visibility", visibilities[0]),
                    GuardAtom("exclude_kind", kinds[0]),
                )
            )
        )
    if len(kinds) == 1:
        candidates.append(Guard((GuardAtom("exclude_kind", kinds[0]),)))
    if len(visibilities) == 1:
        candidates.append(Guard((GuardAtom("exclude_visibility", visibilities[0]),)))
    accepted_dir = _common_dir([d.file for d in accepted])
    if accepted_dir is not None:
        candidates.append(Guard((GuardAtom("restrict_dir", accepted_dir),)))
    names = sorted({d.name for d in rejected})
    regex = "|".join(re.escape(n) for n in names)
    candidates.append(Guard((GuardAtom("exclude_name_regex", regex),)))
    return candidates


def refine(
    scope: DeclaredScope,
    rejected: list[Declaration],
    accepted: list[Declaration],
) -> DeclaredScope:
    """Append one guard that excludes every rejection and no acceptance.

    Candidates are tried from most to least general safe form; the exact-name
    regex at the end always qualifies, so refinement never fails and never
    silently drops a rejection.
    """
    if not rejected:
        raise ValueError("refine called without rejections")
    for guard in _candidate_guards(rejected, accepted):
        if all(guard.excludes(d) for d in rejected) and not any(
            guard.excludes(d) for d in accepted
        ):
            return scope.with_guard(guard)
    # Only possible when a rejected name is also an accepted name. Exclude by
    # name anyway: acceptances are already applied, guards only gate future
    # offers.
    names = sorted({d.name for d in rejected})
    regex = "|".join(re.escape(n) for n in names)
    return scope.with_guard(Guard((GuardAtom("exclude_name_regex", regex),)))

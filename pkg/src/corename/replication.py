"""Replication: finding the next files after one file is done.

Two complementary searches feed the queue. The structural search follows
def-use and call edges out of the renames just applied (both slice
directions), so files wired to the renamed code surface even when their
names share nothing. The semantic search greps accepted old names as whole
tokens over the packages already touched plus their mirrors in the other
source roots, catching test twins and copy-paste cousins the graph misses.
"""
from __future__ import annotations

import posixpath
import re
from dataclasses import dataclass

from .engine import RenameRefactoring
from .minilang import CodeModel, Declaration, slice_decl, tokenize
from .scope import DeclaredScope


@dataclass(frozen=True)
class DiscoveryResult:
    structural: tuple[str, ...]
    semantic: tuple[str, ...]
    enqueued: tuple[str, ...]
    fruitful: bool


def _current_decl(model: CodeModel, applied: RenameRefactoring) -> Declaration | None:
    """The applied rename's declaration in the current model (new name)."""
    for d in model.decls_in_file(applied.file_path):
        if (
            d.line == applied.line_number
            and d.kind == applied.identifier_type
            and d.name == applied.new_name
        ):
            return d
    return None


def slice_files(model: CodeModel, applied: list[RenameRefactoring]) -> set[str]:
    """Files holding at least one statement of any slice over the renames."""
    files: set[str] = set()
    for rename in applied:
        decl = _current_decl(model, rename)
        if decl is None:
            continue
        for direction in ("forward", "backward"):
            for file, _line in slice_decl(model, decl, direction):
                files.add(file)
    return files


def keyword_search(
    model: CodeModel, names: list[str], modified_files: list[str]
) -> set[str]:
    """Whole-token hits of accepted old names near the modified packages.

    Searched over every file in the packages of the modified files, plus the
    same package paths under the other source dirs (main/test mirroring).
    Code hits are exact identifier tokens; comment hits are word-bounded.
    """
    if not names or not modified_files:
        return set()
    layout = model.layout
    dirs: set[str] = set()
    for path in modified_files:
        package = layout.package_of(path)
        for source_dir in layout.source_dirs:
            dirs.add(posixpath.join(source_dir, package) if package else source_dir)
    name_set = set(names)
    comment_rx = re.compile(
        r"(?<![A-Za-z0-9_])(?:"
        + "|".join(re.escape(n) for n in sorted(name_set))
        + r")(?![A-Za-z0-9_])"
    )
    hits: set[str] = set()
    for f in layout.files:
        if posixpath.dirname(f.path) not in dirs:
            continue
        tokens, comments = tokenize(f.path, f.text)
        if any(t.kind == "ident" and t.text in name_set for t in tokens):
            hits.add(f.path)
            continue
        for comment in comments:
            if comment_rx.search(f.text[comment.start : comment.end]):
                hits.add(f.path)
                break
    return hits


def discover(
    model: CodeModel,
    scope: DeclaredScope,
    reasoner,
    visited: set[str],
    modified_files: list[str],
    applied: list[RenameRefactoring],
    accepted_old_names: list[str],
    capacity: int,
) -> DiscoveryResult:
    """One discovery pass: structural first, semantic second, lexicographic
    within each group, filtered by the reasoner, truncated to capacity."""
    structural = sorted(slice_files(model, applied) - visited)
    semantic = sorted(
        keyword_search(model, accepted_old_names, modified_files)
        - visited
        - set(structural)
    )
    enqueued: list[str] = []
    for file in structural + semantic:
        if len(enqueued) >= capacity:
            break
        if reasoner.filter_file(model, file, scope):
            enqueued.append(file)
    return DiscoveryResult(
        structural=tuple(structural),
        semantic=tuple(semantic),
        enqueued=tuple(enqueued),
        fruitful=bool(enqueued),
    )

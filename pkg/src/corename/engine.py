"""Safe rename application on MiniLang models.

Renames are checked, then applied by splicing every declaration and code
reference span and re-binding the whole project. The engine never writes a
project it cannot re-parse: any post-apply inconsistency rolls back to the
previous model. Comments are deliberately untouched by renames; they have
their own best-effort update pass.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .minilang import (
    DECL_KINDS,
    CodeModel,
    Declaration,
    MiniSyntaxError,
    ProjectLayout,
    ResolutionError,
    build_model,
    hypothetical_value_lookup,
)
from .naming import is_identifier


@dataclass(frozen=True)
class RenameRefactoring:
    """One rename, the unit every agent exchanges."""

    file_path: str
    old_name: str
    new_name: str
    line_number: int
    identifier_type: str

    def __post_init__(self):
        if self.identifier_type not in DECL_KINDS:
            raise ValueError(f"unknown identifier type {self.identifier_type!r}")
        if not is_identifier(self.old_name) or not is_identifier(self.new_name):
            raise ValueError("names must be valid identifiers")
        if self.new_name == self.old_name:
            raise ValueError("new name must differ from old name")
        if self.line_number < 1:
            raise ValueError("line numbers are 1-based")

    def key(self) -> tuple[str, int, str, str]:
        return (self.file_path, self.line_number, self.identifier_type, self.old_name)

    def as_dict(self) -> dict:
        return {
            "file_path": self.file_path,
            "old_name": self.old_name,
            "new_name": self.new_name,
            "line_number": self.line_number,
            "identifier_type": self.identifier_type,
        }


@dataclass(frozen=True)
class PreconditionViolation:
    code: str  # unresolved_target | collision | shadowing
    message: str
    file: str
    line: int


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    violations: tuple[PreconditionViolation, ...]
    decl: Declaration | None
    group: tuple[str, ...]  # override group for methods, else the single target


class PreconditionViolated(Exception):
    def __init__(self, rename: RenameRefactoring, violations):
        details = "; ".join(v.message for v in violations)
        super().__init__(f"cannot rename {rename.old_name}: {details}")
        self.rename = rename
        self.violations = tuple(violations)


class InternalReparseFailure(Exception):
    """The edited text failed to re-bind; the previous model stays current."""


@dataclass(frozen=True)
class CommentEdit:
    file: str
    line: int
    before: str
    after: str
    old_name: str
    new_name: str


@dataclass
class ChangeSet:
    """Everything a session applied, in order."""

    applied: list[RenameRefactoring] = field(default_factory=list)
    comment_edits: list[CommentEdit] = field(default_factory=list)
    model_versions: list[int] = field(default_factory=list)
    edited_files: list[tuple[str, ...]] = field(default_factory=list)  # per apply

    def record_apply(self, rename: RenameRefactoring, version: int, files):
        self.applied.append(rename)
        self.model_versions.append(version)
        self.edited_files.append(tuple(files))

    def record_comment_edits(self, edits, version: int):
        self.comment_edits.extend(edits)
        if edits:
            self.model_versions.append(version)

    def modified_files(self) -> list[str]:
        seen: dict[str, None] = {}
        for files in self.edited_files:
            for f in files:
                seen.setdefault(f)
        for edit in self.comment_edits:
            seen.setdefault(edit.file)
        return list(seen)


def resolve_identifier(
    model: CodeModel,
    name: str,
    file: str,
    line_hint: int | None = None,
    kind_hint: str | None = None,
) -> list[Declaration]:
    """All declarations named ``name`` visible in ``file``.

    Visible means declared in the file, referenced from it, or a reachable
    class. Ordered by distance to the line hint, kind-hint match, then line.
    """
    candidates: dict[str, Declaration] = {}
    for d in model.decls_in_file(file):
        if d.name == name:
            candidates[d.id] = d
    for ref in model.references:
        if ref.file != file:
            continue
        d = model.decl(ref.target)
        if d.name == name:
            candidates[d.id] = d
    try:
        package = model.layout.package_of(file)
    except KeyError:
        package = None
    for info in model.classes.values():
        if info.name != name:
            continue
        if info.visibility == "public" or info.package == package:
            candidates[info.decl] = model.decl(info.decl)

    def sort_key(d: Declaration):
        distance = abs(d.line - line_hint) if line_hint is not None else 0
        kind_miss = 0 if (kind_hint is None or d.kind == kind_hint) else 1
        return (distance, kind_miss, d.line, d.id)

    return sorted(candidates.values(), key=sort_key)


def _find_target(model: CodeModel, rename: RenameRefactoring) -> Declaration | None:
    for d in model.decls_in_file(rename.file_path):
        if (
            d.name == rename.old_name
            and d.line == rename.line_number
            and d.kind == rename.identifier_type
        ):
            return d
    return None


def _subclasses_of(model: CodeModel, class_name: str) -> list[str]:
    out = []
    for info in model.classes.values():
        cursor = info.superclass
        while cursor is not None:
            if cursor == class_name:
                out.append(info.name)
                break
            parent = model.classes.get(cursor)
            cursor = parent.superclass if parent else None
    return out


def _hierarchy_family(model: CodeModel, class_name: str) -> set[str]:
    family = {info.name for info in model.ancestry(class_name)}
    family.update(_subclasses_of(model, class_name))
    return family


def check_preconditions(model: CodeModel, rename: RenameRefactoring) -> CheckResult:
    """Decide whether the rename is safe, without editing anything."""
    decl = _find_target(model, rename)
    if decl is None:
        violation = PreconditionViolation(
            "unresolved_target",
            f"no {rename.identifier_type} named {rename.old_name!r} "
            f"at {rename.file_path}:{rename.line_number}",
            rename.file_path,
            rename.line_number,
        )
        return CheckResult(False, (violation,), None, ())
    new = rename.new_name
    violations: list[PreconditionViolation] = []
    group: tuple[str, ...] = (decl.id,)

    def collide(message: str, at: Declaration | None = None):
        site = at or decl
        violations.append(
            PreconditionViolation("collision", message, site.file, site.line)
        )

    if decl.kind == "class":
        other = model.classes.get(new)
        if other is not None:
            collide(f"a class named {new!r} already exists")
    elif decl.kind == "method":
        group = model.override_group(decl.id)
        arities = {model.decl(m).arity for m in group}
        arity = decl.arity
        family: set[str] = set()
        for member_id in group:
            member = model.decl(member_id)
            owner = model.decl(member.owner) if member.owner else None
            if owner is not None:
                family.update(_hierarchy_family(model, owner.name))
        for class_name in sorted(family):
            info = model.classes[class_name]
            for method_id in info.methods:
                m = model.decl(method_id)
                if m.id in group:
                    continue
                if m.name == new and m.arity == arity:
                    collide(
                        f"method {new!r}/{arity} already exists on {class_name}", m
                    )
        del arities
    elif decl.kind == "field":
        owner = model.decl(decl.owner) if decl.owner else None
        if owner is not None:
            for info in model.ancestry(owner.name):
                for field_id in info.fields:
                    f = model.decl(field_id)
                    if f.id == decl.id or f.name != new:
                        continue
                    if info.name == owner.name:
                        collide(f"field {new!r} already exists on {owner.name}", f)
                    elif f.visibility == "public":
                        collide(f"would hide public field {new!r} of {info.name}", f)
            if decl.visibility == "public":
                for sub in _subclasses_of(model, owner.name):
                    for field_id in model.classes[sub].fields:
                        f = model.decl(field_id)
                        if f.name == new:
                            collide(f"field {new!r} on subclass {sub} would hide it", f)
    elif decl.kind == "parameter":
        method_id = decl.owner or ""
        for p in model.params_of(method_id):
            if p.id != decl.id and p.name == new:
                collide(f"parameter {new!r} already exists", p)
        for d in model.decls_in_file(decl.file):
            if d.kind == "local_variable" and d.owner == method_id and d.name == new:
                collide(f"local {new!r} in the same method would shadow it", d)
    elif decl.kind == "local_variable":
        method_id = decl.owner or ""
        for p in model.params_of(method_id):
            if p.name == new:
                collide(f"would shadow parameter {new!r}", p)
        home_block = _block_of_local(model, decl.id)
        for block in model.blocks.values():
            if block.method != method_id:
                continue
            for local_id, _ in block.locals:
                if local_id == decl.id:
                    continue
                other = model.decl(local_id)
                if other.name != new:
                    continue
                if _blocks_related(model, home_block, block.id):
                    collide(f"local {new!r} already in scope", other)

    if decl.kind in ("field", "parameter", "local_variable"):
        violations.extend(_capture_violations(model, decl, new))

    ok = not violations
    return CheckResult(ok, tuple(violations), decl, group if ok else group)


def _block_of_local(model: CodeModel, local_id: str) -> str:
    for block in model.blocks.values():
        for decl_id, _ in block.locals:
            if decl_id == local_id:
                return block.id
    raise KeyError(local_id)


def _blocks_related(model: CodeModel, a: str, b: str) -> bool:
    """True when one block encloses the other (or they are the same)."""

    def chain(block_id: str) -> set[str]:
        out = set()
        cursor: str | None = block_id
        while cursor is not None:
            out.add(cursor)
            cursor = model.blocks[cursor].parent
        return out

    return a in chain(b) or b in chain(a)


def _capture_violations(
    model: CodeModel, decl: Declaration, new_name: str
) -> list[PreconditionViolation]:
    """Find bare references whose binding would change under the rename."""
    violations = []
    renamed = {decl.id: new_name}
    # references of the renamed declaration must still bind to it
    for index in model.reference_indexes_of(decl.id):
        if model.ref_forms[index] != "bare":
            continue
        ctx = model.ref_contexts[index]
        if ctx is None:
            continue
        bound = hypothetical_value_lookup(model, ctx, new_name, renamed)
        ref = model.references[index]
        if bound is None or bound.id != decl.id:
            violations.append(
                PreconditionViolation(
                    "shadowing",
                    f"reference at {ref.file}:{ref.line} would bind to a different "
                    f"declaration after the rename",
                    ref.file,
                    ref.line,
                )
            )
    # references of same-named declarations must not start binding to it
    for other in model.declarations:
        if other.id == decl.id or other.name != new_name:
            continue
        if other.kind not in ("field", "parameter", "local_variable"):
            continue
        for index in model.reference_indexes_of(other.id):
            if model.ref_forms[index] != "bare":
                continue
            ctx = model.ref_contexts[index]
            if ctx is None:
                continue
            bound = hypothetical_value_lookup(model, ctx, new_name, renamed)
            ref = model.references[index]
            if bound is not None and bound.id == decl.id:
                violations.append(
                    PreconditionViolation(
                        "shadowing",
                        f"rename would capture the reference to {other.name!r} "
                        f"at {ref.file}:{ref.line}",
                        ref.file,
                        ref.line,
                    )
                )
    return violations


@dataclass(frozen=True)
class RenameDelta:
    rename: RenameRefactoring
    decl: Declaration  # pre-apply snapshot of the renamed declaration
    group: tuple[str, ...]
    edited_files: tuple[str, ...]
    edit_count: int
    new_version: int


def apply_rename(model: CodeModel, rename: RenameRefactoring) -> tuple[CodeModel, RenameDelta]:
    """Apply a checked rename and return the re-bound model.

    Raises PreconditionViolated when the check fails and
    InternalReparseFailure when the edited text no longer binds cleanly (the
    caller keeps the previous model in that case).
    """
    check = check_preconditions(model, rename)
    if not check.ok:
        raise PreconditionViolated(rename, check.violations)
    assert check.decl is not None
    spans: dict[str, list[tuple[int, int]]] = {}
    for target_id in check.group:
        target = model.decl(target_id)
        spans.setdefault(target.file, []).append(target.span)
        for ref in model.references_of(target_id):
            spans.setdefault(ref.file, []).append(ref.span)
    layout = model.layout
    edited_files = []
    edit_count = 0
    for path in sorted(spans):
        text = layout.file(path).text
        for start, end in sorted(spans[path], reverse=True):
            if text[start:end] != rename.old_name:  # pragma: no cover - engine bug trap
                raise InternalReparseFailure(
                    f"span {path}:{start}-{end} holds {text[start:end]!r}, "
                    f"expected {rename.old_name!r}"
                )
            text = text[:start] + rename.new_name + text[end:]
            edit_count += 1
        layout = layout.with_file_text(path, text)
        edited_files.append(path)
    try:
        new_model = build_model(layout, version=model.version + 1)
    except (MiniSyntaxError, ResolutionError) as exc:
        raise InternalReparseFailure(str(exc)) from exc
    if len(new_model.declarations) != len(model.declarations) or len(
        new_model.references
    ) != len(model.references):
        raise InternalReparseFailure("declaration or reference census changed")
    renamed_target = _find_target(
        new_model,
        RenameRefactoring(
            rename.file_path,
            rename.new_name,
            rename.old_name,  # only used for the lookup key below
            rename.line_number,
            rename.identifier_type,
        ),
    )
    if renamed_target is None:
        raise InternalReparseFailure("renamed declaration not found after re-bind")
    delta = RenameDelta(
        rename=rename,
        decl=check.decl,
        group=check.group,
        edited_files=tuple(edited_files),
        edit_count=edit_count,
        new_version=new_model.version,
    )
    return new_model, delta


def update_comment(
    model: CodeModel, file: str, old_name: str, new_name: str
) -> tuple[CodeModel, list[CommentEdit]]:
    """Rewrite whole-token mentions of old_name inside // comments of a file.

    Best effort by design: code references are already exact, so comments are
    the only place stale names survive. Returns the model unchanged when no
    mention exists.
    """
    spans = model.comment_spans.get(file, ())
    if not spans:
        return model, []
    source = model.layout.file(file)
    text = source.text
    token = re.compile(
        r"(?<![A-Za-z0-9_])" + re.escape(old_name) + r"(?![A-Za-z0-9_])"
    )
    edits: list[CommentEdit] = []
    pieces: list[str] = []
    cursor = 0
    for start, end, line in spans:
        pieces.append(text[cursor:start])
        comment = text[start:end]
        replaced = token.sub(new_name, comment)
        if replaced != comment:
            edits.append(
                CommentEdit(
                    file=file,
                    line=line,
                    before=source.line_text(line),
                    after="",  # filled below once the new text exists
                    old_name=old_name,
                    new_name=new_name,
                )
            )
        pieces.append(replaced)
        cursor = end
    pieces.append(text[cursor:])
    if not edits:
        return model, []
    new_text = "".join(pieces)
    layout = model.layout.with_file_text(file, new_text)
    new_model = build_model(layout, version=model.version + 1)
    new_source = layout.file(file)
    edits = [
        CommentEdit(
            file=e.file,
            line=e.line,
            before=e.before,
            after=new_source.line_text(e.line),
            old_name=old_name,
            new_name=new_name,
        )
        for e in edits
    ]
    return new_model, edits


def write_layout_changes(
    previous: ProjectLayout, current: ProjectLayout
) -> list[str]:
    """Materialize changed file texts to disk under the layout root."""
    written = []
    previous_texts = {f.path: f.text for f in previous.files}
    for f in current.files:
        if previous_texts.get(f.path) == f.text:
            continue
        full = os.path.join(current.root, f.path)
        os.makedirs(os.path.dirname(full), exist_ok=True)
        with open(full, "w", encoding="utf-8") as handle:
            handle.write(f.text)
        written.append(f.path)
    return written

"""Core data types for resolved MiniLang projects.

A CodeModel is an immutable snapshot: every identifier use site is bound to
exactly one declaration, and def-use plus call edges are precomputed. Models
are pure functions of the layout text, so re-parsing equal text yields a
structurally equal model.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field

DECL_KINDS = ("class", "method", "field", "parameter", "local_variable")


class ResolutionError(Exception):
    """An identifier that does not bind, or a declaration clash."""

    def __init__(self, file: str, line: int, name: str, message: str):
        super().__init__(f"{file}:{line}: {name}: {message}")
        self.file = file
        self.line = line
        self.name = name
        self.message = message


@dataclass(frozen=True)
class SourceFile:
    path: str  # posix-style, relative to the project root
    text: str

    def line_offsets(self) -> list[int]:
        offsets = [0]
        text = self.text
        pos = text.find("\n")
        while pos != -1:
            offsets.append(pos + 1)
            pos = text.find("\n", pos + 1)
        return offsets

    def line_of(self, offset: int) -> int:
        """1-based line containing the byte offset."""
        return bisect.bisect_right(self.line_offsets(), offset)

    def line_text(self, line: int) -> str:
        offsets = self.line_offsets()
        start = offsets[line - 1]
        end = offsets[line] - 1 if line < len(offsets) else len(self.text)
        return self.text[start:end]

    def line_count(self) -> int:
        return len(self.line_offsets())


@dataclass(frozen=True)
class ProjectLayout:
    root: str
    source_dirs: tuple[str, ...]
    files: tuple[SourceFile, ...]

    def __post_init__(self):
        paths = [f.path for f in self.files]
        if paths != sorted(paths):
            raise ValueError("layout files must be sorted by path")
        if len(set(paths)) != len(paths):
            raise ValueError("duplicate file path in layout")
        for path in paths:
            if sum(1 for d in self.source_dirs if _under(path, d)) != 1:
                raise ValueError(f"{path} is not under exactly one source dir")

    def file(self, path: str) -> SourceFile:
        for f in self.files:
            if f.path == path:
                return f
        raise KeyError(path)

    def has_file(self, path: str) -> bool:
        return any(f.path == path for f in self.files)

    def source_dir_of(self, path: str) -> str:
        for d in self.source_dirs:
            if _under(path, d):
                return d
        raise KeyError(path)

    def package_of(self, path: str) -> str:
        """Package of a file: its directory path relative to its source dir."""
        d = self.source_dir_of(path)
        rel = path[len(d) + 1 :] if d else path
        parts = rel.split("/")[:-1]
        return "/".join(parts)

    def with_file_text(self, path: str, text: str) -> "ProjectLayout":
        files = tuple(
            SourceFile(f.path, text) if f.path == path else f for f in self.files
        )
        return ProjectLayout(self.root, self.source_dirs, files)


def _under(path: str, directory: str) -> bool:
    return directory == "" or path == directory or path.startswith(directory + "/")


@dataclass(frozen=True)
class Declaration:
    id: str
    kind: str  # one of DECL_KINDS
    name: str
    file: str
    line: int
    span: tuple[int, int]  # byte range of the name token
    owner: str | None  # enclosing declaration id
    visibility: str | None  # classes and members only
    type_name: str | None  # declared type, or return type for methods
    arity: int | None  # methods only


@dataclass(frozen=True)
class Reference:
    target: str  # declaration id
    file: str
    line: int
    span: tuple[int, int]
    in_comment: bool = False  # model references are code-only


@dataclass(frozen=True)
class DefUse:
    reads: tuple[tuple[str, int], ...]  # (file, line) statement locations
    writes: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Statement:
    index: int
    file: str
    line: int
    kind: str  # class_decl|field_decl|method_decl|local_decl|assign|call|return|if|while
    method: str | None  # owning method declaration id, None outside bodies
    reads: tuple[str, ...]  # declaration ids read here (incl. called methods, named classes)
    writes: tuple[str, ...]
    calls: tuple[str, ...]  # callee method declaration ids


@dataclass(frozen=True)
class BlockInfo:
    id: str
    parent: str | None
    method: str
    # locals declared directly in this block, with the offset where each
    # becomes visible (end of its declaring statement)
    locals: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class RefContext:
    """Lexical position of a bare value reference, for shadowing what-ifs."""

    method: str
    block: str
    offset: int


@dataclass(frozen=True)
class ClassInfo:
    decl: str
    name: str
    file: str
    package: str
    visibility: str
    superclass: str | None  # class name
    fields: tuple[str, ...]  # declaration ids, in order
    methods: tuple[str, ...]


@dataclass(frozen=True)
class CodeModel:
    layout: ProjectLayout
    declarations: tuple[Declaration, ...]
    references: tuple[Reference, ...]
    defuse: dict[str, DefUse]
    calls: frozenset[tuple[str, str]]  # (caller method id, callee method id)
    version: int
    statements: tuple[Statement, ...]
    comment_spans: dict[str, tuple[tuple[int, int, int], ...]]  # file -> (start, end, line)
    decl_stmt: dict[str, int]  # declaration id -> index of its declaring statement
    # resolution internals, needed by shadow checks and hypothetical lookups
    classes: dict[str, ClassInfo] = field(default_factory=dict, compare=False)
    blocks: dict[str, BlockInfo] = field(default_factory=dict, compare=False)
    ref_forms: tuple[str, ...] = field(default=(), compare=False)
    ref_contexts: tuple[RefContext | None, ...] = field(default=(), compare=False)
    override_groups: dict[str, tuple[str, ...]] = field(default_factory=dict, compare=False)
    # statement indexes behind defuse, same order as the location tuples
    defuse_stmts: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = field(
        default_factory=dict, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "_decl_by_id", {d.id: d for d in self.declarations})
        by_file: dict[str, list[Declaration]] = {}
        for d in self.declarations:
            by_file.setdefault(d.file, []).append(d)
        object.__setattr__(self, "_decls_by_file", by_file)
        refs_by_target: dict[str, list[int]] = {}
        for i, r in enumerate(self.references):
            refs_by_target.setdefault(r.target, []).append(i)
        object.__setattr__(self, "_refs_by_target", refs_by_target)
        stmts_by_method: dict[str, list[Statement]] = {}
        callsites: dict[str, list[Statement]] = {}
        for s in self.statements:
            if s.method is not None:
                stmts_by_method.setdefault(s.method, []).append(s)
            for callee in s.calls:
                callsites.setdefault(callee, []).append(s)
        object.__setattr__(self, "_stmts_by_method", stmts_by_method)
        object.__setattr__(self, "_callsites_by_method", callsites)
        params_by_method: dict[str, list[Declaration]] = {}
        for d in self.declarations:
            if d.kind == "parameter" and d.owner is not None:
                params_by_method.setdefault(d.owner, []).append(d)
        object.__setattr__(self, "_params_by_method", params_by_method)

    # -- lookups --

    def decl(self, decl_id: str) -> Declaration:
        return self._decl_by_id[decl_id]

    def has_decl(self, decl_id: str) -> bool:
        return decl_id in self._decl_by_id

    def decls_in_file(self, path: str) -> list[Declaration]:
        return list(self._decls_by_file.get(path, []))

    def references_of(self, decl_id: str) -> list[Reference]:
        return [self.references[i] for i in self._refs_by_target.get(decl_id, [])]

    def reference_indexes_of(self, decl_id: str) -> list[int]:
        return list(self._refs_by_target.get(decl_id, []))

    def override_group(self, decl_id: str) -> tuple[str, ...]:
        """All methods renamed together with this one, itself included."""
        return self.override_groups.get(decl_id, (decl_id,))

    def statements_of_method(self, method_id: str) -> list[Statement]:
        return list(self._stmts_by_method.get(method_id, []))

    def params_of(self, method_id: str) -> list[Declaration]:
        return list(self._params_by_method.get(method_id, []))

    def call_sites_of(self, method_id: str) -> list[Statement]:
        return list(self._callsites_by_method.get(method_id, []))

    def declaration_statement(self, decl: Declaration) -> Statement:
        """The statement that introduces the declaration."""
        return self.statements[self.decl_stmt[decl.id]]

    def class_of(self, name: str) -> ClassInfo | None:
        return self.classes.get(name)

    def ancestry(self, class_name: str) -> list[ClassInfo]:
        """The class and its superclasses, nearest first."""
        chain = []
        info = self.classes.get(class_name)
        while info is not None:
            chain.append(info)
            info = self.classes.get(info.superclass) if info.superclass else None
        return chain

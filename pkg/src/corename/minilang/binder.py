"""Name binding for MiniLang: turns parsed files into a CodeModel.

Binding is global: class names resolve project-wide, member access goes
through static types, and every identifier use site either binds uniquely or
raises ResolutionError. The binder also derives the def-use table, the call
graph, statement records for slicing, and override groups.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import parser as ast
from .lexer import BUILTIN_TYPES, Token
from .model import (
    BlockInfo,
    ClassInfo,
    CodeModel,
    Declaration,
    DefUse,
    ProjectLayout,
    RefContext,
    Reference,
    ResolutionError,
    Statement,
)

_AST_CACHE: dict[tuple[str, str], ast.FileTree] = {}
_AST_CACHE_LIMIT = 4096


def _parse_cached(path: str, text: str) -> ast.FileTree:
    key = (path, hashlib.md5(text.encode()).hexdigest())
    tree = _AST_CACHE.get(key)
    if tree is None:
        tree = ast.parse_file(path, text)
        if len(_AST_CACHE) >= _AST_CACHE_LIMIT:
            _AST_CACHE.clear()
        _AST_CACHE[key] = tree
    return tree


@dataclass
class _ClassReg:
    node: ast.ClassNode
    decl: Declaration
    file: str
    package: str
    superclass: str | None = None
    fields: dict[str, Declaration] = field(default_factory=dict)
    field_order: list[str] = field(default_factory=list)
    methods: dict[tuple[str, int], Declaration] = field(default_factory=dict)
    method_order: list[str] = field(default_factory=list)
    params: dict[str, list[Declaration]] = field(default_factory=dict)


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class _Binder:
    def __init__(self, layout: ProjectLayout, trees: list[ast.FileTree]):
        self.layout = layout
        self.trees = trees
        self.classes: dict[str, _ClassReg] = {}
        self.declarations: list[Declaration] = []
        self.references: list[Reference] = []
        self.ref_forms: list[str] = []
        self.ref_contexts: list[RefContext | None] = []
        self.statements: list[Statement] = []
        self.blocks: dict[str, BlockInfo] = {}
        self.decl_stmt: dict[str, int] = {}
        self.calls: set[tuple[str, str]] = set()
        self.defuse_reads: dict[str, list[tuple[str, int]]] = {}
        self.defuse_writes: dict[str, list[tuple[str, int]]] = {}
        self.defuse_read_stmts: dict[str, list[int]] = {}
        self.defuse_write_stmts: dict[str, list[int]] = {}
        self.overrides = _UnionFind()
        # per-statement accumulators
        self._reads: list[str] = []
        self._writes: list[str] = []
        self._calls: list[str] = []
        # current binding context
        self._file = ""
        self._class: _ClassReg | None = None
        self._method: Declaration | None = None
        self._frames: list[dict[str, tuple[Declaration, int]]] = []
        self._frame_ids: list[str] = []
        self._block_counter = 0

    # -- declaration plumbing --

    def _new_decl(
        self,
        kind: str,
        name_token: Token,
        file: str,
        owner: str | None,
        visibility: str | None,
        type_name: str | None,
        arity: int | None = None,
    ) -> Declaration:
        decl = Declaration(
            id=f"{kind}:{file}:{name_token.line}:{name_token.start}",
            kind=kind,
            name=name_token.text,
            file=file,
            line=name_token.line,
            span=(name_token.start, name_token.end),
            owner=owner,
            visibility=visibility,
            type_name=type_name,
            arity=arity,
        )
        self.declarations.append(decl)
        self.defuse_reads[decl.id] = []
        self.defuse_writes[decl.id] = []
        self.defuse_read_stmts[decl.id] = []
        self.defuse_write_stmts[decl.id] = []
        return decl

    def _emit_ref(
        self,
        target: Declaration,
        token: Token,
        form: str,
        ctx: RefContext | None = None,
    ) -> None:
        self.references.append(
            Reference(target.id, self._file, token.line, (token.start, token.end))
        )
        self.ref_forms.append(form)
        self.ref_contexts.append(ctx)

    def _emit_stmt(self, line: int, kind: str, method: str | None) -> Statement:
        stmt = Statement(
            index=len(self.statements),
            file=self._file,
            line=line,
            kind=kind,
            method=method,
            reads=tuple(dict.fromkeys(self._reads)),
            writes=tuple(dict.fromkeys(self._writes)),
            calls=tuple(dict.fromkeys(self._calls)),
        )
        self.statements.append(stmt)
        loc = (stmt.file, stmt.line)
        for decl_id in stmt.reads:
            self.defuse_reads[decl_id].append(loc)
            self.defuse_read_stmts[decl_id].append(stmt.index)
        for decl_id in stmt.writes:
            self.defuse_writes[decl_id].append(loc)
            self.defuse_write_stmts[decl_id].append(stmt.index)
        self._reads, self._writes, self._calls = [], [], []
        return stmt

    # -- pass A: classes --

    def register_classes(self) -> None:
        for tree in self.trees:
            package = self.layout.package_of(tree.path)
            for node in tree.classes:
                name = node.name_token.text
                if name in self.classes:
                    other = self.classes[name]
                    raise ResolutionError(
                        tree.path,
                        node.name_token.line,
                        name,
                        f"class already declared in {other.file}",
                    )
                decl = self._new_decl(
                    "class", node.name_token, tree.path, None, node.visibility, None
                )
                self.classes[name] = _ClassReg(node, decl, tree.path, package)

    def resolve_supertypes(self) -> None:
        for reg in self.classes.values():
            tok = reg.node.extends_token
            if tok is None:
                continue
            target = self.classes.get(tok.text)
            if target is None:
                raise ResolutionError(reg.file, tok.line, tok.text, "unknown superclass")
            self._check_class_visible(target, reg.file, tok)
            reg.superclass = tok.text
        for name, reg in self.classes.items():
            seen = {name}
            cursor = reg.superclass
            while cursor is not None:
                if cursor in seen:
                    raise ResolutionError(
                        reg.file, reg.node.line, name, "inheritance cycle"
                    )
                seen.add(cursor)
                cursor = self.classes[cursor].superclass

    def _check_class_visible(self, target: _ClassReg, from_file: str, tok: Token) -> None:
        if target.decl.visibility == "private":
            if self.layout.package_of(from_file) != target.package:
                raise ResolutionError(
                    from_file,
                    tok.line,
                    tok.text,
                    "private class is visible only inside its package",
                )

    def _topo_order(self) -> list[_ClassReg]:
        order: list[_ClassReg] = []
        done: set[str] = set()

        def visit(name: str) -> None:
            if name in done:
                return
            reg = self.classes[name]
            if reg.superclass is not None:
                visit(reg.superclass)
            if name not in done:
                done.add(name)
                order.append(reg)

        for name in sorted(self.classes):
            visit(name)
        return order

    def _ancestors(self, reg: _ClassReg) -> list[_ClassReg]:
        chain = []
        cursor = reg.superclass
        while cursor is not None:
            parent = self.classes[cursor]
            chain.append(parent)
            cursor = parent.superclass
        return chain

    # -- pass B: members --

    def register_members(self) -> None:
        for reg in self._topo_order():
            self._file = reg.file
            for fnode in reg.node.fields:
                name = fnode.name_token.text
                if name in reg.fields:
                    raise ResolutionError(
                        reg.file, fnode.name_token.line, name, "duplicate field"
                    )
                for ancestor in self._ancestors(reg):
                    inherited = ancestor.fields.get(name)
                    if inherited is not None and inherited.visibility == "public":
                        raise ResolutionError(
                            reg.file,
                            fnode.name_token.line,
                            name,
                            f"hides public field of {ancestor.decl.name}",
                        )
                decl = self._new_decl(
                    "field",
                    fnode.name_token,
                    reg.file,
                    reg.decl.id,
                    fnode.visibility,
                    self._type_name(fnode.type_token),
                )
                reg.fields[name] = decl
                reg.field_order.append(name)
            for mnode in reg.node.methods:
                name = mnode.name_token.text
                arity = len(mnode.params)
                if (name, arity) in reg.methods:
                    raise ResolutionError(
                        reg.file,
                        mnode.name_token.line,
                        name,
                        "duplicate method with same arity",
                    )
                decl = self._new_decl(
                    "method",
                    mnode.name_token,
                    reg.file,
                    reg.decl.id,
                    mnode.visibility,
                    self._type_name(mnode.return_type_token),
                    arity=arity,
                )
                reg.methods[(name, arity)] = decl
                reg.method_order.append(decl.id)
                params: list[Declaration] = []
                seen_params: set[str] = set()
                for pnode in mnode.params:
                    pname = pnode.name_token.text
                    if pname in seen_params:
                        raise ResolutionError(
                            reg.file, pnode.name_token.line, pname, "duplicate parameter"
                        )
                    seen_params.add(pname)
                    params.append(
                        self._new_decl(
                            "parameter",
                            pnode.name_token,
                            reg.file,
                            decl.id,
                            None,
                            self._type_name(pnode.type_token),
                        )
                    )
                reg.params[decl.id] = params
                for ancestor in self._ancestors(reg):
                    base = ancestor.methods.get((name, arity))
                    if base is None:
                        continue
                    if base.visibility == "private":
                        continue  # not inherited, keep looking upward
                    if mnode.visibility == "private":
                        raise ResolutionError(
                            reg.file,
                            mnode.name_token.line,
                            name,
                            f"narrows public method of {ancestor.decl.name}",
                        )
                    self.overrides.union(base.id, decl.id)
                    break

    def _type_name(self, token: Token) -> str:
        return token.text

    # -- pass C: bodies, statements, references --

    def bind_bodies(self) -> None:
        for tree in self.trees:
            self._file = tree.path
            for node in tree.classes:
                reg = self.classes[node.name_token.text]
                self._class = reg
                if node.extends_token is not None:
                    parent = self.classes[node.extends_token.text]
                    self._reads.append(parent.decl.id)
                    self._emit_ref(parent.decl, node.extends_token, "extends")
                stmt = self._emit_stmt(node.line, "class_decl", None)
                self.decl_stmt[reg.decl.id] = stmt.index
                for fnode in node.fields:
                    self._bind_field(reg, fnode)
                for mnode in node.methods:
                    self._bind_method(reg, mnode)
                self._class = None

    def _bind_field(self, reg: _ClassReg, fnode: ast.FieldNode) -> None:
        decl = reg.fields[fnode.name_token.text]
        self._bind_type_ref(fnode.type_token)
        if fnode.init is not None:
            self._bind_expr(fnode.init, field_init=True)
        self._writes.append(decl.id)
        stmt = self._emit_stmt(fnode.line, "field_decl", None)
        self.decl_stmt[decl.id] = stmt.index

    def _bind_method(self, reg: _ClassReg, mnode: ast.MethodNode) -> None:
        decl = reg.methods[(mnode.name_token.text, len(mnode.params))]
        self._method = decl
        self._bind_type_ref(mnode.return_type_token)
        for pnode in mnode.params:
            self._bind_type_ref(pnode.type_token)
        params = reg.params[decl.id]
        for p in params:
            self._writes.append(p.id)
        stmt = self._emit_stmt(mnode.line, "method_decl", decl.id)
        self.decl_stmt[decl.id] = stmt.index
        for p in params:
            self.decl_stmt[p.id] = stmt.index
        self._block_counter = 0
        self._frames = []
        self._frame_ids = []
        self._bind_block(mnode.body)
        self._method = None

    def _bind_type_ref(self, token: Token) -> None:
        if token.text in BUILTIN_TYPES:
            return
        reg = self.classes.get(token.text)
        if reg is None:
            raise ResolutionError(self._file, token.line, token.text, "unknown type")
        self._check_class_visible(reg, self._file, token)
        self._reads.append(reg.decl.id)
        self._emit_ref(reg.decl, token, "type")

    def _bind_block(self, block: ast.Block) -> None:
        assert self._method is not None
        block_id = f"{self._method.id}#b{self._block_counter}"
        self._block_counter += 1
        parent = self._frame_ids[-1] if self._frame_ids else None
        self._frames.append({})
        self._frame_ids.append(block_id)
        for stmt in block.statements:
            self._bind_stmt(stmt)
        frame = self._frames.pop()
        self._frame_ids.pop()
        self.blocks[block_id] = BlockInfo(
            id=block_id,
            parent=parent,
            method=self._method.id,
            locals=tuple((d.id, vis) for d, vis in frame.values()),
        )

    def _bind_stmt(self, stmt: ast.Stmt) -> None:
        assert self._method is not None
        method_id = self._method.id
        if isinstance(stmt, ast.LocalDecl):
            name = stmt.name_token.text
            for frame in self._frames:
                if name in frame:
                    raise ResolutionError(
                        self._file, stmt.name_token.line, name, "duplicate local"
                    )
            for p in self._current_params():
                if p.name == name:
                    raise ResolutionError(
                        self._file, stmt.name_token.line, name, "local shadows parameter"
                    )
            self._bind_type_ref(stmt.type_token)
            if stmt.init is not None:
                self._bind_expr(stmt.init)
            decl = self._new_decl(
                "local_variable",
                stmt.name_token,
                self._file,
                method_id,
                None,
                self._type_name(stmt.type_token),
            )
            self._writes.append(decl.id)
            rec = self._emit_stmt(stmt.line, "local_decl", method_id)
            self.decl_stmt[decl.id] = rec.index
            self._frames[-1][name] = (decl, stmt.end_offset)
        elif isinstance(stmt, ast.Assign):
            self._bind_expr(stmt.value)
            self._bind_assign_target(stmt.target)
            self._emit_stmt(stmt.line, "assign", method_id)
        elif isinstance(stmt, ast.CallStmt):
            self._bind_expr(stmt.call)
            self._emit_stmt(stmt.line, "call", method_id)
        elif isinstance(stmt, ast.Return):
            if stmt.value is not None:
                self._bind_expr(stmt.value)
            self._emit_stmt(stmt.line, "return", method_id)
        elif isinstance(stmt, ast.If):
            self._bind_expr(stmt.condition)
            self._emit_stmt(stmt.line, "if", method_id)
            self._bind_block(stmt.then_block)
            if stmt.else_block is not None:
                self._bind_block(stmt.else_block)
        elif isinstance(stmt, ast.While):
            self._bind_expr(stmt.condition)
            self._emit_stmt(stmt.line, "while", method_id)
            self._bind_block(stmt.body)
        else:  # pragma: no cover - parser produces no other kinds
            raise AssertionError(f"unhandled statement {stmt!r}")

    def _current_params(self) -> list[Declaration]:
        assert self._class is not None and self._method is not None
        return self._class.params[self._method.id]

    # -- value/member lookup --

    def _value_lookup(self, token: Token) -> Declaration:
        name = token.text
        for frame in reversed(self._frames):
            if name in frame:
                return frame[name][0]
        for p in self._current_params():
            if p.name == name:
                return p
        assert self._class is not None
        decl = self._field_lookup(self._class, name, self._class)
        if decl is not None:
            return decl
        raise ResolutionError(self._file, token.line, name, "unresolved name")

    def _field_lookup(
        self, reg: _ClassReg, name: str, accessor: _ClassReg | None
    ) -> Declaration | None:
        cursor: _ClassReg | None = reg
        while cursor is not None:
            decl = cursor.fields.get(name)
            if decl is not None:
                if decl.visibility == "public" or (
                    accessor is not None and cursor.decl.id == accessor.decl.id
                ):
                    return decl
            cursor = self.classes[cursor.superclass] if cursor.superclass else None
        return None

    def _method_lookup(
        self, reg: _ClassReg, name: str, arity: int, accessor: _ClassReg | None
    ) -> Declaration | None:
        cursor: _ClassReg | None = reg
        while cursor is not None:
            decl = cursor.methods.get((name, arity))
            if decl is not None:
                if decl.visibility == "public" or (
                    accessor is not None and cursor.decl.id == accessor.decl.id
                ):
                    return decl
            cursor = self.classes[cursor.superclass] if cursor.superclass else None
        return None

    def _ref_context(self, token: Token) -> RefContext | None:
        if self._method is None or not self._frame_ids:
            return None
        return RefContext(self._method.id, self._frame_ids[-1], token.start)

    # -- expressions --

    def _bind_assign_target(self, target: ast.Expr) -> None:
        if isinstance(target, ast.NameExpr):
            decl = self._value_lookup(target.token)
            self._writes.append(decl.id)
            self._emit_ref(decl, target.token, "bare", self._ref_context(target.token))
            return
        assert isinstance(target, ast.FieldAccess)
        recv_type = self._bind_expr(target.receiver)
        decl = self._resolve_member_field(recv_type, target.name_token)
        self._writes.append(decl.id)
        form = "this" if isinstance(target.receiver, ast.ThisExpr) else "qualified"
        self._emit_ref(decl, target.name_token, form)

    def _resolve_member_field(self, recv_type: str | None, token: Token) -> Declaration:
        reg = self._class_of_type(recv_type, token)
        decl = self._field_lookup(reg, token.text, self._class)
        if decl is None:
            raise ResolutionError(
                self._file, token.line, token.text, f"no field on {reg.decl.name}"
            )
        return decl

    def _class_of_type(self, type_name: str | None, token: Token) -> _ClassReg:
        if type_name is None or type_name in BUILTIN_TYPES or type_name == "null":
            raise ResolutionError(
                self._file,
                token.line,
                token.text,
                f"member access on non-class type {type_name!r}",
            )
        reg = self.classes.get(type_name)
        if reg is None:
            raise ResolutionError(self._file, token.line, token.text, "unknown type")
        return reg

    def _bind_expr(self, expr: ast.Expr, field_init: bool = False) -> str | None:
        """Bind an expression, record its references, return its static type."""
        if isinstance(expr, ast.Literal):
            kind = expr.token.kind
            return {"int": "int", "string": "string", "true": "bool", "false": "bool"}.get(
                kind, "null"
            )
        if isinstance(expr, ast.ThisExpr):
            if field_init or self._method is None:
                raise ResolutionError(
                    self._file, expr.token.line, "this", "not allowed in field initializer"
                )
            assert self._class is not None
            return self._class.decl.name
        if isinstance(expr, ast.NameExpr):
            if field_init:
                assert self._class is not None
                decl = self._field_lookup(self._class, expr.token.text, self._class)
                if decl is None:
                    raise ResolutionError(
                        self._file, expr.token.line, expr.token.text, "unresolved name"
                    )
            else:
                decl = self._value_lookup(expr.token)
            self._reads.append(decl.id)
            ctx = None if field_init else self._ref_context(expr.token)
            self._emit_ref(decl, expr.token, "bare", ctx)
            return decl.type_name
        if isinstance(expr, ast.NewExpr):
            reg = self.classes.get(expr.class_token.text)
            if reg is None:
                raise ResolutionError(
                    self._file, expr.class_token.line, expr.class_token.text, "unknown type"
                )
            self._check_class_visible(reg, self._file, expr.class_token)
            self._reads.append(reg.decl.id)
            self._emit_ref(reg.decl, expr.class_token, "new")
            return reg.decl.name
        if isinstance(expr, ast.CallExpr):
            if field_init:
                raise ResolutionError(
                    self._file,
                    expr.name_token.line,
                    expr.name_token.text,
                    "call not allowed in field initializer",
                )
            for arg in expr.args:
                self._bind_expr(arg)
            arity = len(expr.args)
            if expr.receiver is None:
                assert self._class is not None
                decl = self._method_lookup(
                    self._class, expr.name_token.text, arity, self._class
                )
                form = "call_bare"
            else:
                recv_type = self._bind_expr(expr.receiver)
                reg = self._class_of_type(recv_type, expr.name_token)
                decl = self._method_lookup(reg, expr.name_token.text, arity, self._class)
                form = "call_qualified"
            if decl is None:
                raise ResolutionError(
                    self._file,
                    expr.name_token.line,
                    expr.name_token.text,
                    f"no method with arity {arity}",
                )
            self._reads.append(decl.id)
            self._calls.append(decl.id)
            assert self._method is not None
            self.calls.add((self._method.id, decl.id))
            self._emit_ref(decl, expr.name_token, form)
            return decl.type_name
        if isinstance(expr, ast.FieldAccess):
            if field_init:
                raise ResolutionError(
                    self._file,
                    expr.name_token.line,
                    expr.name_token.text,
                    "field access not allowed in field initializer",
                )
            recv_type = self._bind_expr(expr.receiver)
            decl = self._resolve_member_field(recv_type, expr.name_token)
            self._reads.append(decl.id)
            form = "this" if isinstance(expr.receiver, ast.ThisExpr) else "qualified"
            self._emit_ref(decl, expr.name_token, form)
            return decl.type_name
        if isinstance(expr, ast.Unary):
            inner = self._bind_expr(expr.operand, field_init)
            return "bool" if expr.op == "!" else inner
        if isinstance(expr, ast.Binary):
            left = self._bind_expr(expr.left, field_init)
            self._bind_expr(expr.right, field_init)
            if expr.op in ("==", "!=", "<", ">", "<=", ">=", "&&", "||"):
                return "bool"
            return left
        raise AssertionError(f"unhandled expression {expr!r}")  # pragma: no cover

    # -- assembly --

    def build(self, version: int) -> CodeModel:
        self.register_classes()
        self.resolve_supertypes()
        self.register_members()
        self.bind_bodies()
        groups: dict[str, list[str]] = {}
        for decl in self.declarations:
            if decl.kind != "method":
                continue
            root = self.overrides.find(decl.id)
            groups.setdefault(root, []).append(decl.id)
        override_groups: dict[str, tuple[str, ...]] = {}
        decl_index = {d.id: d for d in self.declarations}
        for members in groups.values():
            if len(members) < 2:
                continue
            ordered = tuple(
                sorted(members, key=lambda i: (decl_index[i].file, decl_index[i].line))
            )
            for member in ordered:
                override_groups[member] = ordered
        defuse = {
            decl.id: DefUse(
                tuple(self.defuse_reads[decl.id]), tuple(self.defuse_writes[decl.id])
            )
            for decl in self.declarations
        }
        defuse_stmts = {
            decl.id: (
                tuple(self.defuse_read_stmts[decl.id]),
                tuple(self.defuse_write_stmts[decl.id]),
            )
            for decl in self.declarations
        }
        comment_spans = {}
        for tree in self.trees:
            comment_spans[tree.path] = tuple(
                (c.start, c.end, c.line) for c in tree.comments
            )
        classes = {
            name: ClassInfo(
                decl=reg.decl.id,
                name=name,
                file=reg.file,
                package=reg.package,
                visibility=reg.decl.visibility or "public",
                superclass=reg.superclass,
                fields=tuple(reg.fields[n].id for n in reg.field_order),
                methods=tuple(reg.method_order),
            )
            for name, reg in self.classes.items()
        }
        return CodeModel(
            layout=self.layout,
            declarations=tuple(self.declarations),
            references=tuple(self.references),
            defuse=defuse,
            calls=frozenset(self.calls),
            version=version,
            statements=tuple(self.statements),
            comment_spans=comment_spans,
            decl_stmt=dict(self.decl_stmt),
            classes=classes,
            blocks=dict(self.blocks),
            ref_forms=tuple(self.ref_forms),
            ref_contexts=tuple(self.ref_contexts),
            override_groups=override_groups,
            defuse_stmts=defuse_stmts,
        )


def build_model(layout: ProjectLayout, version: int = 0) -> CodeModel:
    """Bind a project layout into a CodeModel.

    Raises MiniSyntaxError or ResolutionError on the first problem found.
    """
    trees = [_parse_cached(f.path, f.text) for f in layout.files]
    return _Binder(layout, trees).build(version)


def hypothetical_value_lookup(
    model: CodeModel,
    ctx: RefContext,
    name: str,
    renamed: dict[str, str] | None = None,
) -> Declaration | None:
    """Resolve a bare value name at a recorded reference context.

    ``renamed`` maps declaration ids to replacement names, letting the caller
    ask what a site would bind to after a rename, without editing text.
    """
    renamed = renamed or {}

    def effective(decl: Declaration) -> str:
        return renamed.get(decl.id, decl.name)

    block_id: str | None = ctx.block
    while block_id is not None:
        info = model.blocks[block_id]
        for decl_id, visible_from in info.locals:
            if visible_from <= ctx.offset and effective(model.decl(decl_id)) == name:
                return model.decl(decl_id)
        block_id = info.parent
    method = model.decl(ctx.method)
    for d in model.params_of(ctx.method):
        if effective(d) == name:
            return d
    owner_class = model.decl(method.owner) if method.owner else None
    if owner_class is None:
        return None
    for info in model.ancestry(owner_class.name):
        for field_id in info.fields:
            fdecl = model.decl(field_id)
            if effective(fdecl) != name:
                continue
            if fdecl.visibility == "public" or info.name == owner_class.name:
                return fdecl
    return None

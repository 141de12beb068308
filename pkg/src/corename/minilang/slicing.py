"""Dependency slicing over the def-use table and call graph.

The slice is a conservative transitive closure, not a full dependence graph:
no control dependence, no aliasing. Edges, oriented "a affects b":

  decl -> statement          the statement reads the declaration (call sites
                             read a method, type references read a class)
  statement -> decl          the statement writes the declaration
  call site -> parameter     arguments flow into the callee
  statement -> call site     any statement of a method affects every call
                             site of that method (effects escape to callers)

A forward slice of d collects statements reachable from d; a backward slice
collects statements that reach d. Both include d's declaring statement.
Results are (file, line) locations, which replication consumes per file.
"""
from __future__ import annotations

from .model import CodeModel, Declaration

Location = tuple[str, int]


def slice_decl(model: CodeModel, decl: Declaration, direction: str) -> set[Location]:
    """Compute the forward or backward slice of a declaration."""
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    forward = direction == "forward"
    seen_decls: set[str] = set()
    seen_stmts: set[int] = set()
    work: list[tuple[bool, object]] = [(True, decl.id)]
    while work:
        is_decl, item = work.pop()
        if is_decl:
            decl_id = str(item)
            if decl_id in seen_decls:
                continue
            seen_decls.add(decl_id)
            read_stmts, write_stmts = model.defuse_stmts[decl_id]
            for index in read_stmts if forward else write_stmts:
                work.append((False, index))
            if not forward:
                current = model.decl(decl_id)
                if current.kind == "parameter" and current.owner:
                    # arguments flow from call sites into the parameter
                    for site in model.call_sites_of(current.owner):
                        work.append((False, site.index))
        else:
            index = int(item)  # type: ignore[arg-type]
            if index in seen_stmts:
                continue
            seen_stmts.add(index)
            stmt = model.statements[index]
            if forward:
                for decl_id in stmt.writes:
                    work.append((True, decl_id))
                for callee in stmt.calls:
                    for param in model.params_of(callee):
                        work.append((True, param.id))
                if stmt.method is not None:
                    for site in model.call_sites_of(stmt.method):
                        work.append((False, site.index))
            else:
                for decl_id in stmt.reads:
                    work.append((True, decl_id))
                for callee in stmt.calls:
                    for inner in model.statements_of_method(callee):
                        work.append((False, inner.index))
    result = {(model.statements[i].file, model.statements[i].line) for i in seen_stmts}
    anchor = model.declaration_statement(decl)
    result.add((anchor.file, anchor.line))
    return result

"""MiniLang: a miniature object language small enough to resolve exactly.

Packages are directories, classes live one to a file by convention, and the
binder guarantees that every code reference binds to exactly one declaration.
"""
from .binder import build_model, hypothetical_value_lookup
from .lexer import CommentSpan, MiniSyntaxError, code_and_comment_regions, tokenize
from .loader import DEFAULT_SOURCE_DIRS, layout_from_texts, load_layout, parse_project
from .model import (
    DECL_KINDS,
    BlockInfo,
    ClassInfo,
    CodeModel,
    Declaration,
    DefUse,
    ProjectLayout,
    RefContext,
    Reference,
    ResolutionError,
    SourceFile,
    Statement,
)
from .slicing import slice_decl

__all__ = [
    "DECL_KINDS",
    "DEFAULT_SOURCE_DIRS",
    "BlockInfo",
    "ClassInfo",
    "CodeModel",
    "CommentSpan",
    "Declaration",
    "DefUse",
    "MiniSyntaxError",
    "ProjectLayout",
    "RefContext",
    "Reference",
    "ResolutionError",
    "SourceFile",
    "Statement",
    "build_model",
    "code_and_comment_regions",
    "hypothetical_value_lookup",
    "layout_from_texts",
    "load_layout",
    "parse_project",
    "slice_decl",
    "tokenize",
]

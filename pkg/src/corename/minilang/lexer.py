"""Tokenizer for MiniLang source text.

Produces a flat token stream plus the comment spans, which the model keeps
separate from code: comments never take part in resolution, but the rename
machinery needs their extents to update mentions and to partition text into
code and comment regions.
"""
from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    [
        "class", "extends", "public", "private", "field", "method", "var",
        "if", "else", "while", "return", "new", "this", "true", "false",
        "null", "int", "bool", "string", "void",
    ]
)

BUILTIN_TYPES = frozenset(["int", "bool", "string", "void"])

# Longest first so == beats =.
_PUNCT = [
    "==", "!=", "<=", ">=", "&&", "||",
    "<", ">", "=", "+", "-", "*", "/", "!",
    ".", ",", ";", "(", ")", "{", "}",
]

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")


class MiniSyntaxError(Exception):
    """Raised for malformed source. Carries enough to point at the line."""

    def __init__(self, file: str, line: int, message: str):
        super().__init__(f"{file}:{line}: {message}")
        self.file = file
        self.line = line
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'int' | 'string' | 'punct' | keyword text | 'eof'
    text: str
    start: int
    end: int
    line: int


@dataclass(frozen=True)
class CommentSpan:
    start: int
    end: int  # exclusive, does not include the newline
    line: int


def tokenize(path: str, text: str) -> tuple[list[Token], list[CommentSpan]]:
    """Scan ``text`` into tokens and comment spans.

    Raises MiniSyntaxError on characters outside the language or an unclosed
    string literal.
    """
    tokens: list[Token] = []
    comments: list[CommentSpan] = []
    i = 0
    line = 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            start = i
            while i < n and text[i] != "\n":
                i += 1
            comments.append(CommentSpan(start, i, line))
            continue
        if ch in _IDENT_START:
            start = i
            while i < n and text[i] in _IDENT_CONT:
                i += 1
            word = text[start:i]
            kind = word if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start, i, line))
            continue
        if ch in _DIGITS:
            start = i
            while i < n and text[i] in _DIGITS:
                i += 1
            tokens.append(Token("int", text[start:i], start, i, line))
            continue
        if ch == '"':
            start = i
            i += 1
            while i < n and text[i] not in '"\n':
                i += 1
            if i >= n or text[i] != '"':
                raise MiniSyntaxError(path, line, "unterminated string literal")
            i += 1
            tokens.append(Token("string", text[start:i], start, i, line))
            continue
        matched = None
        for punct in _PUNCT:
            if text.startswith(punct, i):
                matched = punct
                break
        if matched is None:
            raise MiniSyntaxError(path, line, f"unexpected character {ch!r}")
        tokens.append(Token("punct", matched, i, i + len(matched), line))
        i += len(matched)
    tokens.append(Token("eof", "", n, n, line))
    return tokens, comments


def code_and_comment_regions(
    text: str, comments: list[CommentSpan]
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Partition [0, len(text)) into code and comment byte ranges.

    The two lists are disjoint, sorted, and together cover the whole file.
    """
    comment_regions = [(c.start, c.end) for c in comments]
    code_regions: list[tuple[int, int]] = []
    cursor = 0
    for start, end in comment_regions:
        if cursor < start:
            code_regions.append((cursor, start))
        cursor = end
    if cursor < len(text):
        code_regions.append((cursor, len(text)))
    return code_regions, comment_regions

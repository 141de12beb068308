"""Identifier token machinery: splitting, casing, and pattern rewriting.

A name pattern is a pair of lowercase token sequences. Applying it to an
identifier replaces every contiguous occurrence of the old fragment with the
new one, re-cased token by token to match what it replaces. Matching is
plural-tolerant: two tokens match when they differ only by one trailing "s",
so a pattern built from a plural seed still rewrites singular compounds
(joinHints -> queryHints turns joinHintNeedRemove into queryHintNeedRemove).

Examples:
    >>> apply_tokens(("join", "hints"), ("query", "hints"), "JoinHintsResolver")
    'QueryHintsResolver'
    >>> apply_tokens(("join", "hints"), ("query", "hints"), "ALL_JOIN_HINTS")
    'ALL_QUERY_HINTS'
    >>> apply_tokens(("join", "hints"), ("query", "hints"), "LogicalJoin") is None
    True
"""
from __future__ import annotations

import re

_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")

IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def is_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name))


def tokenize_name(name: str) -> list[tuple[str, int, int]]:
    """Split an identifier into (text, start, end) tokens.

    Splits at underscores and camel-case boundaries; digits stay attached to
    the token they follow.
    """
    tokens: list[tuple[str, int, int]] = []
    offset = 0
    for chunk in name.split("_"):
        if chunk:
            pieces = _CAMEL_BOUNDARY.split(chunk)
            pos = offset
            for piece in pieces:
                tokens.append((piece, pos, pos + len(piece)))
                pos += len(piece)
        offset += len(chunk) + 1  # the underscore
    return tokens


def name_tokens(name: str) -> tuple[str, ...]:
    return tuple(t[0].lower() for t in tokenize_name(name))


def casing_of(token: str) -> str:
    letters = [c for c in token if c.isalpha()]
    if not letters:
        return "lower"
    if all(c.isupper() for c in letters):
        return "capital" if len(letters) == 1 else "upper"
    if letters[0].isupper():
        return "capital"
    return "lower"


def recase(token: str, style: str) -> str:
    if style == "upper":
        return token.upper()
    if style == "capital":
        return token[:1].upper() + token[1:].lower()
    return token.lower()


def tokens_equivalent(a: str, b: str) -> bool:
    """Case-insensitive equality, tolerant of one trailing plural 's'."""
    al, bl = a.lower(), b.lower()
    if al == bl:
        return True
    if al == bl + "s" and len(bl) > 1:
        return True
    if bl == al + "s" and len(al) > 1:
        return True
    return False


def _replacement_tokens(
    matched: list[str], old_fragment: tuple[str, ...], new_fragment: tuple[str, ...]
) -> list[str]:
    out: list[str] = []
    for i, new_tok in enumerate(new_fragment):
        if i < len(matched):
            matched_tok = matched[i]
            old_tok = old_fragment[i]
            if old_tok.lower() == new_tok.lower():
                # the pattern leaves this token alone: keep the original text,
                # singular/plural form included
                out.append(matched_tok)
                continue
            base = new_tok
            # transfer the plural delta between pattern token and matched text
            if matched_tok.lower() == old_tok.lower() + "s" and not base.endswith("s"):
                base = base + "s"
            elif old_tok.lower() == matched_tok.lower() + "s" and base.endswith("s"):
                base = base[:-1]
            out.append(recase(base, casing_of(matched_tok)))
        else:
            # length mismatch: extra tokens copy the preceding token's casing
            style = casing_of(out[-1]) if out else casing_of(matched[0])
            out.append(recase(new_tok, style))
    return out


def apply_tokens(
    old_fragment: tuple[str, ...], new_fragment: tuple[str, ...], name: str
) -> str | None:
    """Rewrite ``name`` by the fragment pair, or None when it does not occur."""
    if not old_fragment or not new_fragment:
        raise ValueError("pattern fragments must be non-empty")
    tokens = tokenize_name(name)
    if not tokens:
        return None
    width = len(old_fragment)
    matches: list[int] = []
    i = 0
    while i + width <= len(tokens):
        window = tokens[i : i + width]
        if all(
            tokens_equivalent(window[j][0], old_fragment[j]) for j in range(width)
        ):
            matches.append(i)
            i += width
        else:
            i += 1
    if not matches:
        return None
    has_underscore = "_" in name
    pieces: list[str] = []
    cursor = 0
    for start in matches:
        window = tokens[start : start + width]
        region_start = window[0][1]
        region_end = window[-1][2]
        pieces.append(name[cursor:region_start])
        emitted = _replacement_tokens(
            [t[0] for t in window], old_fragment, new_fragment
        )
        if len(emitted) == len(window):
            # reuse the separators inside the matched region
            rebuilt = []
            for j, tok in enumerate(emitted):
                rebuilt.append(tok)
                if j + 1 < len(window):
                    rebuilt.append(name[window[j][2] : window[j + 1][1]])
            pieces.append("".join(rebuilt))
        else:
            sep = "_" if has_underscore else ""
            pieces.append(sep.join(emitted))
        cursor = region_end
    pieces.append(name[cursor:])
    return "".join(pieces)


def extract_fragments(
    old_name: str, new_name: str
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Derive a fragment pair from one observed rename.

    Strips the longest common token prefix and suffix, then re-attaches one
    adjacent common token (the following one when present, else the
    preceding) so the differing core stays anchored to its context. Raises
    ValueError when no usable pair exists (identical token streams).
    """
    old_tokens = list(name_tokens(old_name))
    new_tokens = list(name_tokens(new_name))
    if not old_tokens or not new_tokens:
        raise ValueError("names must contain at least one token")
    limit = min(len(old_tokens), len(new_tokens))
    prefix = 0
    while prefix < limit and old_tokens[prefix] == new_tokens[prefix]:
        prefix += 1
    suffix = 0
    while (
        suffix < limit - prefix
        and old_tokens[len(old_tokens) - 1 - suffix]
        == new_tokens[len(new_tokens) - 1 - suffix]
    ):
        suffix += 1
    old_core = old_tokens[prefix : len(old_tokens) - suffix]
    new_core = new_tokens[prefix : len(new_tokens) - suffix]
    if not old_core and not new_core:
        raise ValueError("names differ only in case; no token pattern exists")
    if suffix > 0:
        anchor = old_tokens[len(old_tokens) - suffix]
        old_core = old_core + [anchor]
        new_core = new_core + [anchor]
    elif prefix > 0:
        anchor = old_tokens[prefix - 1]
        old_core = [anchor] + old_core
        new_core = [anchor] + new_core
    if not old_core or not new_core:
        raise ValueError("rename is a pure insertion or deletion without context")
    return tuple(old_core), tuple(new_core)


def camel_join(tokens: tuple[str, ...]) -> str:
    """Join lowercase tokens into a camelCase display string."""
    if not tokens:
        return ""
    head, *rest = tokens
    return head + "".join(t[:1].upper() + t[1:] for t in rest)

"""Recursive-descent parser for MiniLang.

Produces a per-file syntax tree; all name binding happens later in the binder.
Every node keeps the tokens it was built from so the binder can attach precise
spans to declarations and references.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lexer import BUILTIN_TYPES, CommentSpan, MiniSyntaxError, Token, tokenize


# --- expression nodes ---


@dataclass
class Expr:
    pass


@dataclass
class Literal(Expr):
    token: Token  # int, string, true, false, null


@dataclass
class ThisExpr(Expr):
    token: Token


@dataclass
class NameExpr(Expr):
    token: Token


@dataclass
class NewExpr(Expr):
    class_token: Token


@dataclass
class CallExpr(Expr):
    receiver: Expr | None  # None means a call on the enclosing class
    name_token: Token
    args: list[Expr]


@dataclass
class FieldAccess(Expr):
    receiver: Expr
    name_token: Token


@dataclass
class Unary(Expr):
    op: str
    operand: Expr


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


# --- statement and declaration nodes ---


@dataclass
class Stmt:
    line: int


@dataclass
class LocalDecl(Stmt):
    type_token: Token
    name_token: Token
    init: Expr | None
    end_offset: int = 0  # offset after the closing ';', scope starts here


@dataclass
class Assign(Stmt):
    target: Expr  # NameExpr or FieldAccess
    value: Expr


@dataclass
class CallStmt(Stmt):
    call: Expr  # CallExpr, possibly wrapped in FieldAccess chain


@dataclass
class Return(Stmt):
    value: Expr | None


@dataclass
class Block:
    statements: list[Stmt] = field(default_factory=list)


@dataclass
class If(Stmt):
    condition: Expr
    then_block: Block
    else_block: Block | None


@dataclass
class While(Stmt):
    condition: Expr
    body: Block


@dataclass
class ParamNode:
    type_token: Token
    name_token: Token


@dataclass
class FieldNode:
    visibility: str
    type_token: Token
    name_token: Token
    init: Expr | None
    line: int


@dataclass
class MethodNode:
    visibility: str
    return_type_token: Token
    name_token: Token
    params: list[ParamNode]
    body: Block
    line: int


@dataclass
class ClassNode:
    visibility: str
    name_token: Token
    extends_token: Token | None
    fields: list[FieldNode]
    methods: list[MethodNode]
    line: int


@dataclass
class FileTree:
    path: str
    classes: list[ClassNode]
    comments: list[CommentSpan]


class _Parser:
    def __init__(self, path: str, tokens: list[Token]):
        self.path = path
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing --

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def check(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        if tok.kind != kind:
            return False
        return text is None or tok.text == text

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.check(kind, text):
            tok = self.peek()
            want = text or kind
            got = tok.text or tok.kind
            raise MiniSyntaxError(self.path, tok.line, f"expected {want!r}, got {got!r}")
        return self.advance()

    def error(self, message: str) -> MiniSyntaxError:
        return MiniSyntaxError(self.path, self.peek().line, message)

    # -- grammar --

    def parse_file(self) -> list[ClassNode]:
        classes = []
        while not self.check("eof"):
            classes.append(self.parse_class())
        return classes

    def parse_visibility(self) -> str:
        if self.check("public"):
            self.advance()
            return "public"
        if self.check("private"):
            self.advance()
            return "private"
        raise self.error("expected 'public' or 'private'")

    def parse_class(self) -> ClassNode:
        visibility = self.parse_visibility()
        kw = self.expect("class")
        name = self.expect("ident")
        extends = None
        if self.check("extends"):
            self.advance()
            extends = self.expect("ident")
        self.expect("punct", "{")
        fields: list[FieldNode] = []
        methods: list[MethodNode] = []
        while not self.check("punct", "}"):
            member_vis = self.parse_visibility()
            if self.check("field"):
                fields.append(self.parse_field(member_vis))
            elif self.check("method"):
                methods.append(self.parse_method(member_vis))
            else:
                raise self.error("expected 'field' or 'method'")
        self.expect("punct", "}")
        return ClassNode(visibility, name, extends, fields, methods, kw.line)

    def parse_type(self) -> Token:
        tok = self.peek()
        if tok.kind == "ident" or tok.kind in BUILTIN_TYPES:
            return self.advance()
        raise self.error("expected a type name")

    def parse_field(self, visibility: str) -> FieldNode:
        kw = self.expect("field")
        type_token = self.parse_type()
        name = self.expect("ident")
        init = None
        if self.check("punct", "="):
            self.advance()
            init = self.parse_expression()
        self.expect("punct", ";")
        return FieldNode(visibility, type_token, name, init, kw.line)

    def parse_method(self, visibility: str) -> MethodNode:
        kw = self.expect("method")
        return_type = self.parse_type()
        name = self.expect("ident")
        self.expect("punct", "(")
        params: list[ParamNode] = []
        if not self.check("punct", ")"):
            while True:
                ptype = self.parse_type()
                pname = self.expect("ident")
                params.append(ParamNode(ptype, pname))
                if self.check("punct", ","):
                    self.advance()
                    continue
                break
        self.expect("punct", ")")
        body = self.parse_block()
        return MethodNode(visibility, return_type, name, params, body, kw.line)

    def parse_block(self) -> Block:
        self.expect("punct", "{")
        block = Block()
        while not self.check("punct", "}"):
            block.statements.append(self.parse_statement())
        self.expect("punct", "}")
        return block

    def parse_statement(self) -> Stmt:
        tok = self.peek()
        if self.check("var"):
            return self.parse_local()
        if self.check("return"):
            self.advance()
            value = None
            if not self.check("punct", ";"):
                value = self.parse_expression()
            self.expect("punct", ";")
            return Return(tok.line, value)
        if self.check("if"):
            return self.parse_if()
        if self.check("while"):
            self.advance()
            self.expect("punct", "(")
            condition = self.parse_expression()
            self.expect("punct", ")")
            body = self.parse_block()
            return While(tok.line, condition, body)
        # Assignment or call statement: parse a postfix expression and look
        # at what follows.
        expr = self.parse_postfix()
        if self.check("punct", "="):
            if not isinstance(expr, (NameExpr, FieldAccess)):
                raise self.error("left side of '=' must be a name or field access")
            self.advance()
            value = self.parse_expression()
            self.expect("punct", ";")
            return Assign(tok.line, expr, value)
        if not isinstance(expr, CallExpr):
            raise self.error("expression statement must be a call")
        self.expect("punct", ";")
        return CallStmt(tok.line, expr)

    def parse_local(self) -> LocalDecl:
        kw = self.expect("var")
        type_token = self.parse_type()
        name = self.expect("ident")
        init = None
        if self.check("punct", "="):
            self.advance()
            init = self.parse_expression()
        semi = self.expect("punct", ";")
        node = LocalDecl(kw.line, type_token, name, init)
        node.end_offset = semi.end
        return node

    def parse_if(self) -> If:
        kw = self.expect("if")
        self.expect("punct", "(")
        condition = self.parse_expression()
        self.expect("punct", ")")
        then_block = self.parse_block()
        else_block = None
        if self.check("else"):
            self.advance()
            else_block = self.parse_block()
        return If(kw.line, condition, then_block, else_block)

    # -- expressions --

    _COMP_OPS = ("==", "!=", "<=", ">=", "<", ">")
    _ADD_OPS = ("+", "-", "*", "/", "&&", "||")

    def parse_expression(self) -> Expr:
        left = self.parse_additive()
        while self.peek().kind == "punct" and self.peek().text in self._COMP_OPS:
            op = self.advance().text
            right = self.parse_additive()
            left = Binary(op, left, right)
        return left

    def parse_additive(self) -> Expr:
        left = self.parse_unary()
        while self.peek().kind == "punct" and self.peek().text in self._ADD_OPS:
            op = self.advance().text
            right = self.parse_unary()
            left = Binary(op, left, right)
        return left

    def parse_unary(self) -> Expr:
        if self.peek().kind == "punct" and self.peek().text in ("!", "-"):
            op = self.advance().text
            return Unary(op, self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_primary()
        while self.check("punct", "."):
            self.advance()
            name = self.expect("ident")
            if self.check("punct", "("):
                args = self.parse_args()
                expr = CallExpr(expr, name, args)
            else:
                expr = FieldAccess(expr, name)
        return expr

    def parse_args(self) -> list[Expr]:
        self.expect("punct", "(")
        args: list[Expr] = []
        if not self.check("punct", ")"):
            while True:
                args.append(self.parse_expression())
                if self.check("punct", ","):
                    self.advance()
                    continue
                break
        self.expect("punct", ")")
        return args

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind in ("int", "string", "true", "false", "null"):
            self.advance()
            return Literal(tok)
        if tok.kind == "this":
            self.advance()
            return ThisExpr(tok)
        if tok.kind == "new":
            self.advance()
            class_token = self.expect("ident")
            self.expect("punct", "(")
            self.expect("punct", ")")
            return NewExpr(class_token)
        if tok.kind == "ident":
            self.advance()
            if self.check("punct", "("):
                args = self.parse_args()
                return CallExpr(None, tok, args)
            return NameExpr(tok)
        if self.check("punct", "("):
            self.advance()
            expr = self.parse_expression()
            self.expect("punct", ")")
            return expr
        raise self.error(f"unexpected token {tok.text or tok.kind!r}")


def parse_file(path: str, text: str) -> FileTree:
    """Parse one MiniLang file into a syntax tree.

    Raises MiniSyntaxError on the first malformed construct.
    """
    tokens, comments = tokenize(path, text)
    parser = _Parser(path, tokens)
    classes = parser.parse_file()
    return FileTree(path, classes, comments)

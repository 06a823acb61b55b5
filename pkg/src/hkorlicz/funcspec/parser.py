"""Precedence-climbing parser for the function-expression language.

Grammar::

    expr   := term (("+" | "-") term)* ;
    term   := factor (("*" | "/") factor)* ;
    factor := unary ("^" factor)? ;
    unary  := "-" unary | atom ;
    atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")" ;

``^`` is right-associative and a leading minus belongs to the base, so
``-x1^2`` is ``(-x1)^2``.
"""

from __future__ import annotations

import re
from typing import NamedTuple, Sequence

from .box import Box
from .expr import FUNCTIONS, BinOp, Call, Const, FuncExpr, Neg, Node, Var

__all__ = ["ParseError", "parse", "parse_expr"]


class ParseError(ValueError):
    """Syntax or name error; ``pos`` is the character offset into the text."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class Token(NamedTuple):
    kind: str  # NUMBER, IDENT, OP, END
    text: str
    pos: int


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "number":
            tokens.append(Token("NUMBER", m.group(), pos))
        elif kind == "ident":
            tokens.append(Token("IDENT", m.group(), pos))
        elif kind == "op":
            tokens.append(Token("OP", m.group(), pos))
        pos = m.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dim: int):
        self.tokens = tokenize(text)
        self.i = 0
        self.dim = dim

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def accept(self, op: str) -> bool:
        if self.tok.kind == "OP" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            self.fail(f"expected {op!r}")

    def fail(self, message: str):
        tok = self.tok
        found = "end of input" if tok.kind == "END" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.pos)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "END":
            self.fail("expected operator or end of input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self.accept("^"):
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self.accept("-"):
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "NUMBER":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "IDENT":
            self.i += 1
            return self.ident(tok)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expected number, variable, function or '('")

    def ident(self, tok: Token) -> Node:
        name = tok.text
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            index = int(m.group(1))
            if not 1 <= index <= self.dim:
                raise ParseError(f"variable {name} out of range for dimension {self.dim}", tok.pos)
            return Var(index - 1)
        if name not in FUNCTIONS:
            raise ParseError(f"unknown identifier {name!r}", tok.pos)
        arity = FUNCTIONS[name][0]
        if not self.accept("("):
            self.fail(f"expected '(' after {name}")
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        close = self.tok
        self.expect(")")
        if arity == 1 and len(args) != 1:
            raise ParseError(f"{name} takes 1 argument, got {len(args)}", close.pos)
        if arity == -1 and len(args) < 2:
            raise ParseError(f"{name} takes at least 2 arguments, got {len(args)}", close.pos)
        return Call(name, tuple(args))


def parse(text: str, dim: int) -> Node:
    """Parse ``text`` into an expression tree over variables ``x1..x{dim}``."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    return _Parser(text, dim).parse()


def parse_expr(
    text: str,
    dim: int,
    domain: Box | None = None,
    singular: Sequence[Sequence[float]] = (),
) -> FuncExpr:
    """Parse ``text`` into a :class:`FuncExpr` on ``domain`` (unit cube by default)."""
    node = parse(text, dim)
    if domain is None:
        domain = Box((0.0,) * dim, (1.0,) * dim)
    elif domain.dim != dim:
        raise ValueError(f"domain dimension {domain.dim} does not match dim={dim}")
    return FuncExpr(node, domain, tuple(tuple(s) for s in singular))

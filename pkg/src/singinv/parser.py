"""Tokenizer and recursive-descent parser for polynomial text.

Grammar (whitespace insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | atom ['^' nat]
    atom   := nat | ident | '(' expr ')'

``p/q`` literals fall out of ``term``.  Parsing yields a small AST that is
evaluated with ordinary Python operators, so the same tree can be read as a
polynomial, a rational function, or a formal expression in invariant names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, UnknownIdentifierError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_.]*)|(?P<op>[-+*/^()\[\]=,]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].isspace():
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# -- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Name:
    id: str
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    pos: int


class _Parser:
    def __init__(self, text: str, tokens: list[Token] | None = None, start: int = 0):
        self.text = text
        self.tokens = tokenize(text) if tokens is None else tokens
        self.i = start

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            self.error(f"expected {text!r}")
        return self.advance()

    def error(self, message: str):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", self.text, tok.pos)

    def expr(self):
        tok = self.tok
        if tok.text in "+-" and tok.kind == "op":
            self.advance()
            node = self.term()
            if tok.text == "-":
                node = Neg(node, tok.pos)
        else:
            node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance()
            node = BinOp(op.text, node, self.term(), op.pos)
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance()
            node = BinOp(op.text, node, self.factor(), op.pos)
        return node

    def factor(self):
        tok = self.tok
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.factor(), tok.pos)
        node = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.advance()
            if self.tok.kind != "num":
                self.error("expected a natural-number exponent")
            node = Pow(node, int(self.advance().text), caret.pos)
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(int(tok.text), tok.pos)
        if tok.kind == "ident":
            self.advance()
            return Name(tok.text, tok.pos)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected a number, identifier or '('")

    def finish(self):
        if self.tok.kind != "end":
            self.error("unexpected trailing input")


def parse_expression(text: str):
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def evaluate(node, resolve, text: str = None, divide=None):
    """Evaluate an AST with Python operators.

    ``resolve(name)`` maps identifiers to values (returning ``None`` for unknown
    names).  ``divide(a, b)`` performs ``/`` and may raise ``TypeError`` to
    reject a division; the default is plain ``a / b``.
    """

    def ev(n):
        if isinstance(n, Num):
            return n.value
        if isinstance(n, Name):
            value = resolve(n.id)
            if value is None:
                raise UnknownIdentifierError(f"unknown identifier {n.id!r}", text, n.pos)
            return value
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Pow):
            return ev(n.base) ** n.exp
        left, right = ev(n.left), ev(n.right)
        if n.op == "+":
            return left + right
        if n.op == "-":
            return left - right
        if n.op == "*":
            return left * right
        try:
            if isinstance(left, int) and isinstance(right, int):
                if right == 0:
                    raise ZeroDivisionError
                return Fraction(left, right)
            return divide(left, right) if divide else left / right
        except ZeroDivisionError:
            raise ParseError("division by zero", text, n.pos) from None
        except TypeError as exc:
            raise ParseError(str(exc) or "unsupported division", text, n.pos) from None

    return ev(node)


# -- contraction specs -----------------------------------------------------

def _index_group(p: _Parser):
    """``[ij^kl]`` -> ((labels...), (variances...)), or variances None when no '^'."""
    p.expect("[")
    lower, upper, seen_caret = "", "", False
    while not (p.tok.kind == "op" and p.tok.text == "]"):
        tok = p.tok
        if tok.kind == "ident" and tok.text.isalpha():
            p.advance()
            if seen_caret:
                upper += tok.text
            else:
                lower += tok.text
        elif tok.kind == "op" and tok.text == "^" and not seen_caret:
            p.advance()
            seen_caret = True
        else:
            p.error("expected index letters or a single '^'")
    p.expect("]")
    labels = tuple(lower + upper)
    variances = ("l",) * len(lower) + ("u",) * len(upper) if seen_caret else None
    return labels, variances


def parse_contraction_line(text: str):
    """Parse ``lhs = f1[..] f2[..] ...``.

    Returns ``(name, free_labels, free_variances, factors)`` where each factor is
    ``(tensor_name, labels, variances_or_None)``.  A factor without ``^`` takes
    the variance of whatever tensor is bound to its name.
    """
    p = _Parser(text)
    if p.tok.kind != "ident":
        p.error("expected a tensor name")
    name = p.advance().text
    free, free_var = (), ()
    if p.tok.kind == "op" and p.tok.text == "[":
        free, free_var = _index_group(p)
        free_var = free_var or ("l",) * len(free)
    p.expect("=")
    factors = []
    while p.tok.kind != "end":
        if p.tok.kind == "op" and p.tok.text == "*":
            p.advance()
            continue
        if p.tok.kind != "ident":
            p.error("expected a tensor factor")
        fname = p.advance().text
        labels, variances = _index_group(p)
        factors.append((fname, labels, variances))
    if not factors:
        p.error("expected at least one factor")
    return name, free, free_var, factors

"""Tokenizer and recursive-descent parser for polynomial text.

Syntax: terms joined by ``+``/``-``, products with ``*``, powers with ``^``
and a non-negative integer exponent, parentheses for grouping.  Integer
coefficients are reduced modulo ``p``.  Precedence is ``^`` > ``*`` > ``+ -``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<punct>[-+*^(),;=:{}/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "punct", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("int", "name"):
            tokens.append(Token(kind, m.group(), line, col))
        elif kind in ("arrow", "punct"):
            tokens.append(Token("punct", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text) -> bool:
        tok = self.peek
        return tok.kind == "punct" and tok.text == text

    def at_word(self, word) -> bool:
        tok = self.peek
        return tok.kind == "name" and tok.text == word

    def error(self, message, expected=(), tok=None):
        tok = tok or self.peek
        return ParseError(message, tok.line, tok.column, expected)

    def expect(self, text) -> Token:
        if not self.at(text):
            found = self.peek.text or "end of input"
            raise self.error(f"found {found!r}", [repr(text)])
        return self.next()

    def expect_word(self, word) -> Token:
        if not self.at_word(word):
            found = self.peek.text or "end of input"
            raise self.error(f"found {found!r}", [repr(word)])
        return self.next()

    def expect_kind(self, kind, what) -> Token:
        if self.peek.kind != kind:
            found = self.peek.text or "end of input"
            raise self.error(f"found {found!r}", [what])
        return self.next()


_ATOM_START = ["INT", "NAME", "'('"]


def parse_expr(ts: TokenStream, ctx):
    """Parse one polynomial expression from ``ts`` into ``ctx``."""
    sign = 1
    if ts.at("+") or ts.at("-"):
        sign = -1 if ts.next().text == "-" else 1
    acc = _parse_term(ts, ctx)
    if sign < 0:
        acc = -acc
    while ts.at("+") or ts.at("-"):
        op = ts.next().text
        t = _parse_term(ts, ctx)
        acc = acc + t if op == "+" else acc - t
    return acc


def _parse_term(ts, ctx):
    acc = _parse_factor(ts, ctx)
    while ts.at("*"):
        ts.next()
        acc = acc * _parse_factor(ts, ctx)
    return acc


def _parse_factor(ts, ctx):
    base = _parse_atom(ts, ctx)
    if ts.at("^"):
        ts.next()
        k = int(ts.expect_kind("int", "INT").text)
        base = base**k
    return base


def _parse_atom(ts, ctx):
    tok = ts.peek
    if tok.kind == "int":
        ts.next()
        return ctx.const(int(tok.text))
    if tok.kind == "name":
        ts.next()
        if tok.text not in ctx.names:
            raise ParseError(
                f"undeclared variable {tok.text!r}", tok.line, tok.column, ctx.names
            )
        return ctx.var(tok.text)
    if ts.at("("):
        ts.next()
        inner = parse_expr(ts, ctx)
        ts.expect(")")
        return inner
    found = tok.text or "end of input"
    raise ts.error(f"found {found!r}", _ATOM_START)


def parse_poly(text: str, ctx):
    ts = TokenStream(tokenize(text))
    f = parse_expr(ts, ctx)
    if ts.peek.kind != "eof":
        raise ts.error(f"trailing input {ts.peek.text!r}", ["'+'", "'-'", "'*'", "'^'"])
    return f

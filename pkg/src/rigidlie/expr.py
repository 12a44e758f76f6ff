"""Parsing of polynomial expressions written in coordinate names.

Grammar (whitespace insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' INT]
    atom   := NUMBER ['/' NUMBER] | NAME | '(' expr ')'

Names follow the basis-label pattern ``[A-Za-z][A-Za-z0-9_']*``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from .poly import Polynomial

NAME_RE = r"[A-Za-z][A-Za-z0-9_']*"
_TOKEN = re.compile(rf"\s*(?:(?P<num>\d+)|(?P<name>{NAME_RE})|(?P<op>[-+*/^()]))")


class ExpressionError(ValueError):
    pass


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"unexpected character {text[pos:].strip()[:1]!r} at column {pos + 1}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, variables: Mapping[str, int], nvars: int):
        self.toks = tokens
        self.i = 0
        self.vars = variables
        self.nvars = nvars

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            want = value or "a token"
            raise ExpressionError(f"expected {want!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def done(self) -> bool:
        return self.i >= len(self.toks)

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ExpressionError("polynomial exponents must be non-negative integers")
            base = base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            value = Fraction(int(val))
            if self.peek()[1] == "/":
                self.take()
                k2, v2 = self.take()
                if k2 != "num":
                    raise ExpressionError("malformed rational constant")
                value = Fraction(int(val), int(v2))
            return Polynomial.constant(self.nvars, value)
        if kind == "name":
            self.take()
            if val not in self.vars:
                raise ExpressionError(f"unknown variable {val!r}")
            return Polynomial.variable(self.nvars, self.vars[val])
        if val == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ExpressionError(f"unexpected token {val!r}")


def parse_polynomial(text: str, names) -> Polynomial:
    """Parse ``text`` in the ring whose variables are ``names`` (in order)."""
    names = list(names)
    variables = {n: i for i, n in enumerate(names)}
    p = _Parser(tokenize(text), variables, len(names))
    if p.done():
        raise ExpressionError("empty expression")
    out = p.expr()
    if not p.done():
        raise ExpressionError(f"trailing input at token {p.peek()[1]!r}")
    return out


def parse_rational(text: str) -> Fraction:
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1].strip()
    if not re.fullmatch(r"[-+]?\d+(/\d+)?", t):
        raise ExpressionError(f"not a rational number: {text!r}")
    return Fraction(t)

"""Parser for the ASCII class-expression grammar used by the CLI.

Grammar (whitespace-insensitive):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := INT | atom ['^' INT]
    atom   := 'u' | 't' | NAME | 's(' NAME ')'

NAME is a generator name such as m1, xi2 or tau0; t may carry a negative
exponent.  The result is an Element over the supplied generator table.
"""

from __future__ import annotations

import re

from .errors import ConfigError, ResolutionError
from .fpcore import Element

_TOKEN = re.compile(
    r"\s*(?:(?P<int>-?\d+)|(?P<sname>s\(\s*[A-Za-z]+\d*\s*\))|(?P<name>[A-Za-z]+\d*)"
    r"|(?P<op>[\^*+()-]))"
)


class ExprError(ConfigError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprError(f"cannot read {text[pos]!r}", pos)
        if m.lastgroup == "int":
            tokens.append(("int", int(m.group("int")), pos))
        elif m.lastgroup == "sname":
            inner = m.group("sname")
            tokens.append(("name", "s(" + inner[2:-1].strip() + ")", pos))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), pos))
        else:
            tokens.append(("op", m.group("op"), pos))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, table):
        self.tokens = tokens
        self.idx = 0
        self.table = table

    def peek(self):
        return self.tokens[self.idx]

    def take(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        out = self.term().scaled(sign)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            nxt = self.term()
            out = out + (nxt if op == "+" else nxt.scaled(-1))
        return out

    def term(self):
        out = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            out = out * self.factor()
        return out

    def factor(self):
        kind, value, pos = self.take()
        if kind == "int":
            base = Element.unit(self.table, value)
            return self._maybe_pow(base, pos, scalar=value)
        if kind == "name":
            if value not in self.table:
                raise ExprError(f"unknown generator {value!r}", pos)
            exp = self._exponent()
            try:
                return Element.gen(self.table, value, exp)
            except ResolutionError as exc:
                raise ExprError(str(exc), pos)
        raise ExprError(f"unexpected token {value!r}", pos)

    def _exponent(self):
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, value, pos = self.take()
            if kind != "int":
                raise ExprError("exponent must be an integer", pos)
            return value
        return 1

    def _maybe_pow(self, base, pos, scalar):
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, value, _ = self.take()
            if kind != "int" or value < 0:
                raise ExprError("integer powers only", pos)
            return Element.unit(self.table, scalar**value)
        return base


def parse_expression(text, table):
    """Parse a class expression into an Element over the given table."""
    parser = _Parser(tokenize(text), table)
    out = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ExprError(f"trailing input {value!r}", pos)
    return out

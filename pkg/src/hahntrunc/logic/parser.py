"""Recursive-descent parser for the ASCII formula language.

Precedence from loosest to tightest: ``<->``, ``->`` (right associative),
``|``, ``&``, then ``!``, quantifiers and atoms.  A quantifier body extends
as far to the right as possible.
"""
from __future__ import annotations

import re

from ..errors import ParseError, SortError
from .syntax import (
    Add, And, Eq, Exists, Forall, Iff, Implies, Less, Member, Not, Num, Or,
    SetVar, Truth, Var, is_set_name,
)

__all__ = ["parse_formula", "tokenize"]

_TOKEN = re.compile(r"\s*(?:(<->|->|[()&|!.=<+])|(\d+)|([A-Za-z_][A-Za-z0-9_']*))")
_KEYWORDS = {"forall", "exists", "in", "true", "false"}


def tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        sym, num, ident = m.groups()
        start = m.start(m.lastindex)
        if sym:
            tokens.append(("sym", sym, start))
        elif num:
            tokens.append(("num", int(num), start))
        elif ident in _KEYWORDS:
            tokens.append(("kw", ident, start))
        else:
            tokens.append(("id", ident, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, msg, pos=None, cls=ParseError):
        raise cls(msg, self.text, self.tok[2] if pos is None else pos)

    def accept(self, kind, value=None):
        k, v, _ = self.tok
        if k == kind and (value is None or v == value):
            self.i += 1
            return True
        return False

    def expect(self, kind, value, what):
        if not self.accept(kind, value):
            found = self.tok[1] if self.tok[0] != "end" else "end of input"
            self.error(f"expected {what}, found {found!r}")

    def parse(self):
        f = self.iff()
        if self.tok[0] != "end":
            self.error(f"unexpected {self.tok[1]!r}")
        return f

    def iff(self):
        left = self.implies()
        while self.tok[:2] == ("sym", "<->"):
            pos = self.tok[2]
            self.i += 1
            left = Iff(left, self.implies(), pos)
        return left

    def implies(self):
        left = self.disj()
        if self.tok[:2] == ("sym", "->"):
            pos = self.tok[2]
            self.i += 1
            return Implies(left, self.implies(), pos)
        return left

    def disj(self):
        left = self.conj()
        while self.tok[:2] == ("sym", "|"):
            pos = self.tok[2]
            self.i += 1
            left = Or(left, self.conj(), pos)
        return left

    def conj(self):
        left = self.unary()
        while self.tok[:2] == ("sym", "&"):
            pos = self.tok[2]
            self.i += 1
            left = And(left, self.unary(), pos)
        return left

    def unary(self):
        kind, value, pos = self.tok
        if (kind, value) == ("sym", "!"):
            self.i += 1
            return Not(self.unary(), pos)
        if kind == "kw" and value in ("forall", "exists"):
            self.i += 1
            if self.tok[0] != "id":
                self.error(f"expected a variable after {value!r}")
            name, vpos = self.tok[1], self.tok[2]
            self.i += 1
            var = SetVar(name, vpos) if is_set_name(name) else Var(name, vpos)
            self.expect("sym", ".", "'.' after the quantified variable")
            body = self.iff()
            return (Forall if value == "forall" else Exists)(var, body, pos)
        if kind == "kw" and value in ("true", "false"):
            self.i += 1
            return Truth(value == "true", pos)
        if (kind, value) == ("sym", "("):
            self.i += 1
            f = self.iff()
            self.expect("sym", ")", "')'")
            return f
        return self.atom()

    def atom(self):
        pos = self.tok[2]
        left = self.term()
        kind, value, opos = self.tok
        if (kind, value) == ("sym", "="):
            self.i += 1
            return Eq(left, self.term(), pos)
        if (kind, value) == ("sym", "<"):
            self.i += 1
            return Less(left, self.term(), pos)
        if (kind, value) == ("kw", "in"):
            self.i += 1
            if self.tok[0] != "id":
                self.error("expected a set variable after 'in'")
            name, spos = self.tok[1], self.tok[2]
            if not is_set_name(name):
                self.error(f"{name!r} is an element variable but a set is required", spos, SortError)
            self.i += 1
            return Member(left, SetVar(name, spos), pos)
        found = value if kind != "end" else "end of input"
        self.error(f"expected '=', '<' or 'in', found {found!r}", opos)

    def term(self):
        left = self.primary()
        while self.tok[:2] == ("sym", "+"):
            pos = self.tok[2]
            self.i += 1
            left = Add(left, self.primary(), pos)
        return left

    def primary(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(value, pos)
        if kind == "id":
            if is_set_name(value):
                self.error(f"{value!r} is a set variable but an element is required", pos, SortError)
            self.i += 1
            return Var(value, pos)
        found = value if kind != "end" else "end of input"
        self.error(f"expected a variable or numeral, found {found!r}")


def parse_formula(text: str):
    """Parse formula text into a well-sorted AST; raises ParseError or SortError."""
    return _Parser(text).parse()

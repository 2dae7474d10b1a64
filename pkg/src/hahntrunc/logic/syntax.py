"""Two-sorted formula syntax: element terms, set variables, connectives, quantifiers.

Variable sort is carried by the name: lowercase initial for elements,
uppercase initial for sets.  Every node records its source offset in ``pos``;
positions never take part in equality or hashing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "Var", "Num", "Add", "SetVar", "Eq", "Less", "Member", "Truth",
    "Not", "And", "Or", "Implies", "Iff", "Forall", "Exists",
    "Term", "Formula", "is_set_name", "free_variables", "format_formula",
]


def is_set_name(name: str) -> bool:
    return name[:1].isupper()


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SetVar:
    name: str
    pos: int = field(default=0, compare=False)


Term = Union[Var, Num, Add]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Less:
    left: Term
    right: Term
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Member:
    elem: Term
    set: SetVar
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Truth:
    value: bool
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Not:
    body: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Forall:
    var: Union[Var, SetVar]
    body: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Exists:
    var: Union[Var, SetVar]
    body: "Formula"
    pos: int = field(default=0, compare=False)


Formula = Union[Eq, Less, Member, Truth, Not, And, Or, Implies, Iff, Forall, Exists]

BINARY = (And, Or, Implies, Iff)
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_ATOM_PREC = 5


def term_variables(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Add):
        return term_variables(t.left) | term_variables(t.right)
    return set()


def free_variables(f) -> set:
    """Names of the free element and set variables of a formula."""
    if isinstance(f, (Eq, Less)):
        return term_variables(f.left) | term_variables(f.right)
    if isinstance(f, Member):
        return term_variables(f.elem) | {f.set.name}
    if isinstance(f, Truth):
        return set()
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, BINARY):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body) - {f.var.name}
    raise TypeError(f"not a formula: {f!r}")


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.value)
    return f"{format_term(t.left)}+{format_term(t.right)}"


def _fmt(f):
    """Return (text, precedence, right_open).

    ``right_open`` marks text ending in a quantifier whose body would swallow
    anything appended after it.
    """
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}", _ATOM_PREC, False
    if isinstance(f, Less):
        return f"{format_term(f.left)} < {format_term(f.right)}", _ATOM_PREC, False
    if isinstance(f, Member):
        return f"{format_term(f.elem)} in {f.set.name}", _ATOM_PREC, False
    if isinstance(f, Truth):
        return ("true" if f.value else "false"), _ATOM_PREC, False
    if isinstance(f, Not):
        text, prec, open_ = _fmt(f.body)
        if prec < _ATOM_PREC:
            return f"!({text})", _ATOM_PREC, False
        return f"!{text}", _ATOM_PREC, open_
    if isinstance(f, (Forall, Exists)):
        text, prec, _ = _fmt(f.body)
        if prec < _ATOM_PREC:
            text = f"({text})"
        word = "forall" if isinstance(f, Forall) else "exists"
        return f"{word} {f.var.name}. {text}", _ATOM_PREC, True
    op = type(f)
    p = _PREC[op]
    lt, lp, lo = _fmt(f.left)
    rt, rp, ro = _fmt(f.right)
    right_assoc = op is Implies
    if lo or lp < p or (lp == p and right_assoc):
        lt = f"({lt})"
    wrap_right = rp < p or (rp == p and not right_assoc)
    if wrap_right:
        rt = f"({rt})"
    return f"{lt} {_SYMBOL[op]} {rt}", p, ro and not wrap_right


def format_formula(f) -> str:
    """Canonical text; ``parse_formula(format_formula(f)) == f``."""
    return _fmt(f)[0]

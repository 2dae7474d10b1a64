"""Compilation of formulas into a flat node program.

Nodes live in four parallel ``array('q')`` columns (kind, a, b, c) so the
compiled enumeration kernel can walk them without touching Python objects.
Element values are ints in ``[0, bound)``; an undefined term evaluates to -1.
Set values are bitmasks.

Implications are guarded: ``A -> C`` is read as ``(A & def(C)) -> C`` where
``def(C)`` says every compound term on the quantifier-free surface of ``C``
lies inside the domain.  A step ``x in S -> x+m in S`` therefore only fires
when ``x+m < bound``.

Under the ``lfp`` strategy every set universal must have the Horn shape

    forall S. (side & facts & rules) -> consequent

with facts ``t in S``, rules ``forall xs. (body -> t in S)`` whose body is a
conjunction of ``u in S`` atoms and S-free formulas, and a consequent in
which ``S`` occurs only positively.  Such a node is evaluated by computing
the least set satisfying the antecedent.
"""
from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from ..errors import StrategyError
from .syntax import (
    BINARY, Add, And, Eq, Exists, Forall, Iff, Implies, Less, Member, Not, Num,
    Or, SetVar, Truth, Var, free_variables, is_set_name,
)

# opcodes; mirrored by the enum in _kernel.pyx
T_VAR, T_CONST, T_ADD = 0, 1, 2
F_TRUE, F_FALSE, F_EQ, F_LT, F_MEM, F_DEF = 10, 11, 12, 13, 14, 15
F_NOT, F_AND, F_OR, F_IMP, F_IFF = 20, 21, 22, 23, 24
F_ALL_E, F_EX_E, F_ALL_S, F_EX_S, F_LFP = 30, 31, 32, 33, 34

OPCODES = {name: value for name, value in globals().items()
           if name[:2] in ("T_", "F_") and isinstance(value, int)}

_CONST_CAP = 1 << 62


@dataclass
class Rule:
    slots: tuple
    body: tuple
    head: int


@dataclass
class Horn:
    set_slot: int
    side: tuple
    facts: tuple
    rules: tuple
    guard: int
    consequent: int
    # free slots of the antecedent alone; the least set depends only on these
    antecedent_free: frozenset = frozenset()


@dataclass
class Program:
    kind: array = field(default_factory=lambda: array("q"))
    a: array = field(default_factory=lambda: array("q"))
    b: array = field(default_factory=lambda: array("q"))
    c: array = field(default_factory=lambda: array("q"))
    root: int = -1
    strategy: str = "enum"
    free: dict = field(default_factory=dict)
    set_slots: set = field(default_factory=set)
    nslots: int = 0
    node_free: list = field(default_factory=list)
    horn: dict = field(default_factory=dict)
    cache: dict = field(default_factory=dict, repr=False)

    def emit(self, kind, a=0, b=0, c=0, free=frozenset()):
        self.kind.append(kind)
        self.a.append(a)
        self.b.append(b)
        self.c.append(c)
        self.node_free.append(frozenset(free))
        return len(self.kind) - 1

    def new_slot(self, is_set):
        slot = self.nslots
        self.nslots += 1
        if is_set:
            self.set_slots.add(slot)
        return slot

    @property
    def has_lfp(self):
        return bool(self.horn)

    @property
    def has_set_quantifier(self):
        return any(k in (F_ALL_S, F_EX_S, F_LFP) for k in self.kind)


def _surface_terms(f, out):
    """Non-variable terms in atoms of ``f`` not under a quantifier or implication."""
    if isinstance(f, (Eq, Less)):
        for t in (f.left, f.right):
            if not isinstance(t, Var):
                out.append(t)
    elif isinstance(f, Member):
        if not isinstance(f.elem, Var):
            out.append(f.elem)
    elif isinstance(f, Not):
        _surface_terms(f.body, out)
    elif isinstance(f, (And, Or, Iff)):
        _surface_terms(f.left, out)
        _surface_terms(f.right, out)
    return out


def _flatten_and(f):
    if isinstance(f, And):
        return _flatten_and(f.left) + _flatten_and(f.right)
    return [f]


def _positive_in(f, name) -> bool:
    """True when set variable ``name`` occurs free in ``f`` only positively."""
    if name not in free_variables(f):
        return True
    if isinstance(f, Member):
        return True
    if isinstance(f, (And, Or)):
        return _positive_in(f.left, name) and _positive_in(f.right, name)
    if isinstance(f, (Forall, Exists)):
        return _positive_in(f.body, name)
    if isinstance(f, Implies):
        return name not in free_variables(f.left) and _positive_in(f.right, name)
    return False


class _Compiler:
    def __init__(self, strategy):
        self.prog = Program(strategy=strategy)

    def compile(self, formula):
        prog = self.prog
        scope = {}
        for name in sorted(free_variables(formula)):
            scope[name] = prog.new_slot(is_set_name(name))
        prog.free = dict(scope)
        prog.root = self.formula(formula, scope)
        return prog

    def term(self, t, scope):
        p = self.prog
        if isinstance(t, Var):
            slot = scope[t.name]
            return p.emit(T_VAR, slot, free={slot})
        if isinstance(t, Num):
            return p.emit(T_CONST, min(t.value, _CONST_CAP))
        left = self.term(t.left, scope)
        right = self.term(t.right, scope)
        return p.emit(T_ADD, left, right, free=p.node_free[left] | p.node_free[right])

    def guard(self, consequent, scope):
        terms = _surface_terms(consequent, [])
        if not terms:
            return -1
        p = self.prog
        node = -1
        for t in terms:
            ti = self.term(t, scope)
            d = p.emit(F_DEF, ti, free=p.node_free[ti])
            node = d if node < 0 else p.emit(F_AND, node, d, free=p.node_free[node] | p.node_free[d])
        return node

    def formula(self, f, scope):
        p = self.prog
        fr = p.node_free
        if isinstance(f, Truth):
            return p.emit(F_TRUE if f.value else F_FALSE)
        if isinstance(f, (Eq, Less)):
            left, right = self.term(f.left, scope), self.term(f.right, scope)
            return p.emit(F_EQ if isinstance(f, Eq) else F_LT, left, right, free=fr[left] | fr[right])
        if isinstance(f, Member):
            t = self.term(f.elem, scope)
            slot = scope[f.set.name]
            return p.emit(F_MEM, t, slot, free=fr[t] | {slot})
        if isinstance(f, Not):
            body = self.formula(f.body, scope)
            return p.emit(F_NOT, body, free=fr[body])
        if isinstance(f, Implies):
            left, right = self.formula(f.left, scope), self.formula(f.right, scope)
            g = self.guard(f.right, scope)
            free = fr[left] | fr[right] | (fr[g] if g >= 0 else frozenset())
            return p.emit(F_IMP, left, right, g, free=free)
        if isinstance(f, BINARY):
            kind = {And: F_AND, Or: F_OR, Iff: F_IFF}[type(f)]
            left, right = self.formula(f.left, scope), self.formula(f.right, scope)
            return p.emit(kind, left, right, free=fr[left] | fr[right])
        if isinstance(f, (Forall, Exists)):
            is_set = isinstance(f.var, SetVar)
            if is_set and self.prog.strategy == "lfp":
                if isinstance(f, Exists):
                    raise StrategyError(
                        "the lfp strategy cannot evaluate an existential set quantifier "
                        f"(at column {f.pos + 1})")
                return self.horn(f, scope)
            slot = p.new_slot(is_set)
            inner = dict(scope)
            inner[f.var.name] = slot
            body = self.formula(f.body, inner)
            if is_set:
                kind = F_ALL_S if isinstance(f, Forall) else F_EX_S
            else:
                kind = F_ALL_E if isinstance(f, Forall) else F_EX_E
            return p.emit(kind, slot, body, free=fr[body] - {slot})
        raise TypeError(f"not a formula: {f!r}")

    def horn(self, f, scope):
        p = self.prog
        name = f.var.name

        def reject(why):
            raise StrategyError(
                f"set quantifier over {name} at column {f.pos + 1} is not Horn-shaped: {why}")

        if not isinstance(f.body, Implies):
            reject("body is not an implication")
        slot = p.new_slot(True)
        inner = dict(scope)
        inner[name] = slot
        side, facts, rules = [], [], []
        for conj in _flatten_and(f.body.left):
            if name not in free_variables(conj):
                side.append(self.formula(conj, inner))
            elif isinstance(conj, Member) and conj.set.name == name:
                facts.append(self.term(conj.elem, inner))
            else:
                rules.append(self.rule(conj, name, inner, reject))
        if not _positive_in(f.body.right, name):
            reject("the consequent uses the set negatively")
        consequent = self.formula(f.body.right, inner)
        guard = self.guard(f.body.right, inner)

        antecedent = set()
        for i in list(side) + list(facts):
            antecedent |= p.node_free[i]
        for r in rules:
            rf = set(p.node_free[r.head])
            for i in r.body:
                rf |= p.node_free[i]
            antecedent |= rf - set(r.slots)
        antecedent.discard(slot)
        free = set(antecedent)
        for i in [consequent] + ([guard] if guard >= 0 else []):
            free |= p.node_free[i]
        free.discard(slot)
        horn = Horn(slot, tuple(side), tuple(facts), tuple(rules), guard, consequent,
                    frozenset(antecedent))
        node = p.emit(F_LFP, slot, len(p.horn), free=free)
        p.horn[node] = horn
        return node

    def rule(self, conj, name, scope, reject):
        p = self.prog
        inner = dict(scope)
        slots = []
        while isinstance(conj, Forall):
            if isinstance(conj.var, SetVar):
                reject("a rule quantifies over sets")
            slot = p.new_slot(False)
            inner[conj.var.name] = slot
            slots.append(slot)
            conj = conj.body
        if isinstance(conj, Implies):
            body_parts, head = _flatten_and(conj.left), conj.right
        else:
            body_parts, head = [], conj
        if not (isinstance(head, Member) and head.set.name == name):
            reject("a rule does not conclude membership in the set")
        body = []
        for b in body_parts:
            if name in free_variables(b) and not (isinstance(b, Member) and b.set.name == name):
                reject("a rule body uses the set other than as 'u in S'")
            body.append(self.formula(b, inner))
        return Rule(tuple(slots), tuple(body), self.term(head.elem, inner))


def compile_formula(formula, strategy: str = "enum") -> Program:
    if strategy not in ("enum", "lfp"):
        raise StrategyError(f"unknown strategy {strategy!r}")
    return _Compiler(strategy).compile(formula)

"""Closure-compiling evaluator for node programs.

Handles every opcode, including least-fixed-point set universals.  With
``memo=True`` quantifier nodes whose free variables are all elements cache
their truth value per assignment of those variables; the cache lives on the
program, so repeated queries against the same bound share it.
"""
from __future__ import annotations

from itertools import product

from .program import (
    F_ALL_E, F_ALL_S, F_AND, F_DEF, F_EQ, F_EX_E, F_EX_S, F_FALSE, F_IFF, F_IMP,
    F_LFP, F_LT, F_MEM, F_NOT, F_OR, F_TRUE, T_ADD, T_CONST, T_VAR,
)

_QUANTIFIERS = (F_ALL_E, F_EX_E, F_ALL_S, F_EX_S, F_LFP)
_MISSING = object()


class _Builder:
    def __init__(self, prog, bound, memo):
        self.p = prog
        self.bound = bound
        self.memo = memo
        self.done = {}
        self.fixpoints = {}

    # terms return -1 when undefined
    def term(self, i):
        p, bound = self.p, self.bound
        k = p.kind[i]
        if k == T_VAR:
            slot = p.a[i]
            return lambda env: env[slot]
        if k == T_CONST:
            v = p.a[i] if p.a[i] < bound else -1
            return lambda env: v
        left, right = self.term(p.a[i]), self.term(p.b[i])

        def add(env):
            x = left(env)
            if x < 0:
                return -1
            y = right(env)
            if y < 0:
                return -1
            s = x + y
            return s if s < bound else -1
        return add

    def form(self, i):
        f = self.done.get(i)
        if f is None:
            f = self._form(i)
            p = self.p
            if self.memo and p.kind[i] in _QUANTIFIERS and not (p.node_free[i] & p.set_slots):
                f = _memoized(f, tuple(sorted(p.node_free[i])), p.cache.setdefault((self.bound, i), {}))
            self.done[i] = f
        return f

    def _form(self, i):
        p, bound = self.p, self.bound
        k, a, b, c = p.kind[i], p.a[i], p.b[i], p.c[i]
        if k == F_TRUE:
            return lambda env: True
        if k == F_FALSE:
            return lambda env: False
        if k in (F_EQ, F_LT):
            left, right = self.term(a), self.term(b)
            if k == F_EQ:
                def eq(env):
                    x = left(env)
                    return x >= 0 and x == right(env)
                return eq

            def lt(env):
                x = left(env)
                y = right(env)
                return x >= 0 and y >= 0 and x < y
            return lt
        if k == F_MEM:
            t, slot = self.term(a), b

            def mem(env):
                x = t(env)
                return x >= 0 and (env[slot] >> x) & 1 == 1
            return mem
        if k == F_DEF:
            t = self.term(a)
            return lambda env: t(env) >= 0
        if k == F_NOT:
            body = self.form(a)
            return lambda env: not body(env)
        if k == F_AND:
            left, right = self.form(a), self.form(b)
            return lambda env: left(env) and right(env)
        if k == F_OR:
            left, right = self.form(a), self.form(b)
            return lambda env: left(env) or right(env)
        if k == F_IFF:
            left, right = self.form(a), self.form(b)
            return lambda env: left(env) == right(env)
        if k == F_IMP:
            left, right = self.form(a), self.form(b)
            if c < 0:
                return lambda env: not left(env) or right(env)
            guard = self.form(c)
            return lambda env: not left(env) or not guard(env) or right(env)
        if k in (F_ALL_E, F_EX_E, F_ALL_S, F_EX_S):
            slot, body = a, self.form(b)
            domain = range(bound) if k in (F_ALL_E, F_EX_E) else range(1 << bound)
            if k in (F_ALL_E, F_ALL_S):
                def forall(env):
                    for v in domain:
                        env[slot] = v
                        if not body(env):
                            return False
                    return True
                return forall

            def exists(env):
                for v in domain:
                    env[slot] = v
                    if body(env):
                        return True
                return False
            return exists
        if k == F_LFP:
            return self.lfp(i)
        raise ValueError(f"unknown opcode {k}")

    def fixpoint(self, i):
        """Closure computing the least set for Horn node ``i`` (None when vacuous)."""
        if i in self.fixpoints:
            return self.fixpoints[i]
        h = self.p.horn[i]
        bound = self.bound
        slot = h.set_slot
        side = [self.form(j) for j in h.side]
        facts = [self.term(j) for j in h.facts]
        rules = [(r.slots, [self.form(j) for j in r.body], self.term(r.head)) for r in h.rules]

        def least(env):
            for s in side:
                if not s(env):
                    return None
            S = 0
            for fact in facts:
                v = fact(env)
                if v < 0:
                    return None
                S |= 1 << v
            env[slot] = S
            changed = True
            while changed:
                changed = False
                for slots, body, head in rules:
                    if len(slots) == 1:
                        assignments = ((v,) for v in range(bound))
                    else:
                        assignments = product(range(bound), repeat=len(slots))
                    for values in assignments:
                        for s, v in zip(slots, values):
                            env[s] = v
                        h_val = head(env)
                        if h_val < 0 or (S >> h_val) & 1:
                            continue
                        if all(cond(env) for cond in body):
                            S |= 1 << h_val
                            env[slot] = S
                            changed = True
            return S

        p = self.p
        if self.memo and not (h.antecedent_free & p.set_slots):
            least = _memoized(least, tuple(sorted(h.antecedent_free)),
                              p.cache.setdefault((self.bound, "least", i), {}))
        self.fixpoints[i] = least
        return least

    def lfp(self, i):
        h = self.p.horn[i]
        least = self.fixpoint(i)
        consequent = self.form(h.consequent)
        guard = self.form(h.guard) if h.guard >= 0 else None
        slot = h.set_slot

        def forall_horn(env):
            if guard is not None and not guard(env):
                return True
            S = least(env)
            if S is None:
                return True
            env[slot] = S
            return consequent(env)
        return forall_horn


def _memoized(f, slots, table):
    if len(slots) == 1:
        (s,) = slots

        def cached(env):
            key = env[s]
            r = table.get(key, _MISSING)
            if r is _MISSING:
                r = table[key] = f(env)
            return r
        return cached

    def cached_many(env):
        key = tuple([env[s] for s in slots])
        r = table.get(key, _MISSING)
        if r is _MISSING:
            r = table[key] = f(env)
        return r
    return cached_many


def builder(prog, bound, memo):
    key = ("builder", bound, memo)
    b = prog.cache.get(key)
    if b is None:
        b = prog.cache[key] = _Builder(prog, bound, memo)
    return b


def evaluate(prog, env, bound, memo=False) -> bool:
    return builder(prog, bound, memo).form(prog.root)(list(env))


def least_fixed_point(prog, node, env, bound):
    """The least set (as a bitmask) for Horn node ``node``, or None if vacuous."""
    return builder(prog, bound, False).fixpoint(node)(list(env))

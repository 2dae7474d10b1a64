"""Evaluation of closed (or fully assigned) formulas over a bounded structure.

The structure has elements ``0..bound-1``, all subsets of them, partial
addition (``x+y`` is undefined once it reaches ``bound``) and membership.
An atom mentioning an undefined term is false; implications are guarded by
the definedness of their consequent's terms.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from ..errors import BoundError, StrategyError, UsageError
from . import _pyeval, kernel
from .parser import parse_formula
from .program import F_LFP, compile_formula
from .syntax import Forall, SetVar

__all__ = ["Strategy", "BoundedStructure", "evaluate", "compile_cached", "least_fixed_point"]

# 2**MAX_ENUM_BOUND subsets per set quantifier is the most enumeration will try
MAX_ENUM_BOUND = 24


class Strategy(str, Enum):
    ENUM = "enum"
    LFP = "lfp"


@lru_cache(maxsize=256)
def compile_cached(formula, strategy: str):
    if isinstance(formula, str):
        formula = parse_formula(formula)
    return compile_formula(formula, strategy)


def _env(prog, bound, assignment):
    env = [0] * max(prog.nslots, 1)
    assignment = assignment or {}
    missing = sorted(set(prog.free) - set(assignment))
    if missing:
        raise UsageError(f"open formula: no value for free variable(s) {', '.join(missing)}")
    for name, slot in prog.free.items():
        value = assignment[name]
        if slot in prog.set_slots:
            try:
                members = list(value)
            except TypeError:
                raise UsageError(f"set variable {name} needs a set of elements") from None
            mask = 0
            for x in members:
                if not 0 <= x < bound:
                    raise BoundError(f"{name} contains {x}, outside [0, {bound})")
                mask |= 1 << x
            env[slot] = mask
        else:
            if isinstance(value, bool) or not isinstance(value, int):
                raise UsageError(f"element variable {name} needs an integer")
            if not 0 <= value < bound:
                raise BoundError(f"{name} = {value} lies outside [0, {bound})")
            env[slot] = value
    return env


def evaluate(formula, bound: int, assignment=None, strategy="lfp", backend=None) -> bool:
    """Truth value of ``formula`` in the structure with domain ``[0, bound)``.

    ``formula`` is text or an AST.  ``strategy`` is ``"lfp"`` (Horn set
    universals via least fixed points) or ``"enum"`` (all ``2**bound``
    subsets; runs on the compiled kernel when available).
    """
    if bound < 1:
        raise BoundError("the bound must be at least 1")
    strategy = Strategy(strategy).value
    prog = compile_cached(formula, strategy)
    env = _env(prog, bound, assignment)
    if strategy == "lfp":
        return _pyeval.evaluate(prog, env, bound, memo=True)
    if prog.has_set_quantifier and bound > MAX_ENUM_BOUND:
        raise StrategyError(f"enumerating 2^{bound} subsets is out of reach; use the lfp strategy")
    return kernel.pick(bound, backend).eval_program(prog, env, bound)


def least_fixed_point(formula, bound: int, assignment=None) -> frozenset | None:
    """The least set satisfying the antecedent of a Horn ``forall S. ... -> ...``.

    ``None`` when a side condition or fact fails, so the universal holds
    vacuously.
    """
    if isinstance(formula, str):
        formula = parse_formula(formula)
    if not (isinstance(formula, Forall) and isinstance(formula.var, SetVar)):
        raise UsageError("expected a formula of the form 'forall S. ...'")
    prog = compile_cached(formula, "lfp")
    env = _env(prog, bound, assignment)
    if prog.kind[prog.root] != F_LFP:
        raise StrategyError("formula is not a Horn set universal")
    mask = _pyeval.least_fixed_point(prog, prog.root, env, bound)
    if mask is None:
        return None
    return frozenset(i for i in range(bound) if (mask >> i) & 1)


@dataclass(frozen=True)
class BoundedStructure:
    """``({0..bound-1}, subsets; partial +, in)``."""

    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise BoundError("the bound must be at least 1")

    def evaluate(self, formula, assignment=None, strategy="lfp", backend=None) -> bool:
        return evaluate(formula, self.bound, assignment, strategy, backend)

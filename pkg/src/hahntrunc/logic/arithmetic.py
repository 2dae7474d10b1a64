"""Divisibility, products of consecutive numbers and multiplication, each
defined from bounded addition and set membership and decided by the
formula evaluator.

    m | n        forall S. (0 in S & forall x. (x in S -> x+m in S)) -> n in S
    n = m(m+1)   forall k. (n | k <-> m | k & (m+1) | k)
    n = m*k      (m+k)(m+k+1) = m(m+1) + k(k+1) + n + n
"""
from __future__ import annotations

from itertools import count

from ..errors import BoundError
from .evaluator import evaluate, least_fixed_point

__all__ = [
    "DIVISIBILITY", "CONSECUTIVE_PRODUCT", "MULTIPLICATION",
    "divides_formula", "consecutive_product_formula", "multiplication_formula",
    "mso_divides", "mso_consec_mult", "mso_mult", "least_inductive_set",
]


class _Fresh:
    def __init__(self):
        self._n = count(1)

    def elem(self, stem="x"):
        return f"{stem}{next(self._n)}"

    def set(self, stem="S"):
        return f"{stem}{next(self._n)}"


def divides_formula(d: str, n: str, fresh=None) -> str:
    """``d | n`` for element terms ``d`` and ``n`` (given as text)."""
    if fresh is None:
        S, x = "S", "x"
    else:
        S, x = fresh.set(), fresh.elem()
    return f"forall {S}. (0 in {S} & forall {x}. ({x} in {S} -> {x}+{d} in {S})) -> {n} in {S}"


def consecutive_product_formula(a: str, n: str, fresh=None) -> str:
    """``n = a*(a+1)`` for element terms ``a`` and ``n``."""
    fresh = fresh or _Fresh()
    k = fresh.elem("j")

    def div(d, e):
        return f"({divides_formula(d, e, fresh)})"

    return f"forall {k}. ({div(n, k)} <-> {div(a, k)} & {div(a + '+1', k)})"


def multiplication_formula(m: str = "m", k: str = "k", n: str = "n") -> str:
    """``n = m*k`` through three consecutive products and bounded addition."""
    fresh = _Fresh()
    p, q, r = fresh.elem("p"), fresh.elem("q"), fresh.elem("r")

    def cons(a, b):
        return f"({consecutive_product_formula(a, b, fresh)})"

    return (f"exists {p}. ({cons(f'{m}+{k}', p)} & exists {q}. ({cons(m, q)} & "
            f"exists {r}. ({cons(k, r)} & {p} = {q}+{r}+{n}+{n})))")


DIVISIBILITY = divides_formula("m", "n")
CONSECUTIVE_PRODUCT = consecutive_product_formula("m", "n")
MULTIPLICATION = multiplication_formula()


def _check_nat(**values):
    for name, v in values.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise BoundError(f"{name} must be a natural number, got {v!r}")


def mso_divides(m: int, n: int, bound: int, strategy="lfp") -> bool:
    """``m | n`` decided in the bounded structure; 0 divides only 0."""
    _check_nat(m=m, n=n, bound=bound)
    if m >= bound or n >= bound:
        raise BoundError(f"arguments must lie below the bound {bound}")
    return evaluate(DIVISIBILITY, bound, {"m": m, "n": n}, strategy)


def mso_consec_mult(m: int, n: int, bound: int, strategy="lfp") -> bool:
    """``n = m(m+1)``; requires ``bound > m(m+1)`` so the product is in range."""
    _check_nat(m=m, n=n, bound=bound)
    if bound <= m * (m + 1) or bound < 2:
        raise BoundError(f"bound {bound} must exceed m(m+1) = {m * (m + 1)} and be at least 2")
    if n >= bound:
        raise BoundError(f"n = {n} must lie below the bound {bound}")
    return evaluate(CONSECUTIVE_PRODUCT, bound, {"m": m, "n": n}, strategy)


def mso_mult(m: int, k: int, n: int, bound: int, strategy="lfp") -> bool:
    """``n = m*k``; requires ``bound > (m+k)(m+k+1)``."""
    _check_nat(m=m, k=k, n=n, bound=bound)
    s = m + k
    if bound <= s * (s + 1) or bound < 2:
        raise BoundError(f"bound {bound} must exceed (m+k)(m+k+1) = {s * (s + 1)} and be at least 2")
    if n >= bound:
        raise BoundError(f"n = {n} must lie below the bound {bound}")
    return evaluate(MULTIPLICATION, bound, {"m": m, "k": k, "n": n}, strategy)


def least_inductive_set(m: int, bound: int) -> frozenset:
    """Least subset of ``[0, bound)`` containing 0 and closed under the guarded step ``+m``."""
    _check_nat(m=m, bound=bound)
    if m >= bound:
        raise BoundError(f"m = {m} must lie below the bound {bound}")
    return least_fixed_point(DIVISIBILITY, bound, {"m": m, "n": 0})

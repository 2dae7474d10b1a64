"""Ordered abelian value groups and coefficient fields.

Group elements are plain Python values so that ordering and hashing are
native: ``int`` for the integers, :class:`~fractions.Fraction` for the
rationals and :class:`Lex2` for lexicographically ordered pairs.  Coefficients
are :class:`~fractions.Fraction` (rational field) or :class:`Fp` (prime field).

A session fixes one group kind and one field through an :class:`Algebra`;
everything else in the package is parameterised by it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ParseError, UsageError

__all__ = [
    "Lex2", "Fp", "GroupElement", "Coefficient",
    "IntegerGroup", "RationalGroup", "Lex2Group", "RationalField", "PrimeField",
    "Algebra", "make_algebra",
    "group_add", "group_neg", "group_compare",
    "field_add", "field_mul", "field_neg", "field_inverse",
]


class Lex2(tuple):
    """A pair of integers under the lexicographic order and componentwise addition."""

    __slots__ = ()

    def __new__(cls, first, second):
        return tuple.__new__(cls, (int(first), int(second)))

    def __add__(self, other):
        if not isinstance(other, Lex2):
            return NotImplemented
        return Lex2(self[0] + other[0], self[1] + other[1])

    def __sub__(self, other):
        if not isinstance(other, Lex2):
            return NotImplemented
        return Lex2(self[0] - other[0], self[1] - other[1])

    def __neg__(self):
        return Lex2(-self[0], -self[1])

    def __mul__(self, k):
        # scalar multiple k*(a, b); tuple repetition is never wanted here
        if not isinstance(k, int):
            return NotImplemented
        return Lex2(k * self[0], k * self[1])

    __rmul__ = __mul__

    def __repr__(self):
        return f"Lex2({self[0]}, {self[1]})"

    def __str__(self):
        return f"({self[0]},{self[1]})"


class Fp:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise UsageError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        if isinstance(other, Fraction):
            raise UsageError("cannot mix prime-field and rational coefficients")
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(v - self.value, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(self.value * v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self) -> Fp:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        return Fp(pow(self.value, n, self.p), self.p)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return self * Fp(v, self.p).inverse()

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


GroupElement = Union[int, Fraction, Lex2]
Coefficient = Union[Fraction, Fp]

_INT = re.compile(r"\s*(-?\d+)\s*$")
_RAT = re.compile(r"\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")
_PAIR = re.compile(r"\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def _parse_fraction(text: str, what: str) -> Fraction:
    m = _RAT.match(text)
    if not m:
        raise ParseError(f"expected a {what}, got {text.strip()!r}", text, 0)
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError("zero denominator", text, text.index("/") + 1)
    return Fraction(int(m.group(1)), den)


def _ceil_div(a: int | Fraction, b: int | Fraction) -> int:
    return -((-a) // b)


# -- value groups -----------------------------------------------------------

class ValueGroup:
    kind = ""

    def contains(self, x) -> bool:
        raise NotImplementedError

    def check(self, x):
        if not self.contains(x):
            raise UsageError(f"{x!r} is not an element of the {self.kind} value group")
        return x

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def multiples_needed(self, step, target) -> int | None:
        """Least ``k >= 0`` with ``k*step >= target``, for ``step > 0``.

        ``None`` when no such multiple exists (non-archimedean gap).
        """
        raise NotImplementedError

    def random(self, rng, spread: int = 4):
        raise NotImplementedError


@dataclass(frozen=True)
class IntegerGroup(ValueGroup):
    kind = "int"
    zero = 0

    def contains(self, x):
        return type(x) is int

    def parse(self, text):
        m = _INT.match(text)
        if not m:
            raise ParseError(f"expected an integer exponent, got {text.strip()!r}", text, 0)
        return int(m.group(1))

    def multiples_needed(self, step, target):
        return max(0, _ceil_div(target, step))

    def random(self, rng, spread=4):
        return rng.randint(-spread, spread)


@dataclass(frozen=True)
class RationalGroup(ValueGroup):
    kind = "rat"
    zero = Fraction(0)

    def contains(self, x):
        return type(x) is Fraction

    def parse(self, text):
        return _parse_fraction(text, "rational exponent")

    def multiples_needed(self, step, target):
        return max(0, _ceil_div(target, step))

    def random(self, rng, spread=4):
        return Fraction(rng.randint(-2 * spread, 2 * spread), rng.choice((1, 2, 3)))


@dataclass(frozen=True)
class Lex2Group(ValueGroup):
    kind = "lex2"
    zero = Lex2(0, 0)

    def contains(self, x):
        return type(x) is Lex2

    def parse(self, text):
        m = _PAIR.match(text)
        if not m:
            raise ParseError(f"expected a pair exponent (a,b), got {text.strip()!r}", text, 0)
        return Lex2(int(m.group(1)), int(m.group(2)))

    def multiples_needed(self, step, target):
        a, b = step
        c, d = target
        if a == 0:
            if c < 0:
                return 0
            if c > 0:
                return None
            return max(0, _ceil_div(d, b))
        k = max(0, _ceil_div(c, a))
        while k * step < target:
            k += 1
        return k

    def random(self, rng, spread=4):
        return Lex2(rng.randint(-2, 2), rng.randint(-spread, spread))


# -- coefficient fields -----------------------------------------------------

class CoefficientField:
    kind = ""

    def contains(self, c) -> bool:
        raise NotImplementedError

    def check(self, c):
        if not self.contains(c):
            raise UsageError(f"{c!r} is not an element of the {self.kind} coefficient field")
        return c

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, c) -> str:
        return str(c)

    def is_negative(self, c) -> bool:
        return False

    def inverse(self, c):
        raise NotImplementedError

    def random(self, rng, nonzero=True):
        raise NotImplementedError


@dataclass(frozen=True)
class RationalField(CoefficientField):
    kind = "rat"
    zero = Fraction(0)
    one = Fraction(1)

    def contains(self, c):
        return type(c) is Fraction

    def parse(self, text):
        return _parse_fraction(text, "rational coefficient")

    def is_negative(self, c):
        return c < 0

    def inverse(self, c):
        if c == 0:
            raise ZeroDivisionError("0 has no rational inverse")
        return 1 / c

    def random(self, rng, nonzero=True):
        while True:
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            if c or not nonzero:
                return c


@dataclass(frozen=True)
class PrimeField(CoefficientField):
    p: int = 7
    kind = "fp"

    def __post_init__(self):
        from sympy import isprime

        if not isprime(self.p):
            raise UsageError(f"modulus {self.p} is not prime")

    @property
    def zero(self):
        return Fp(0, self.p)

    @property
    def one(self):
        return Fp(1, self.p)

    def contains(self, c):
        return type(c) is Fp and c.p == self.p

    def parse(self, text):
        m = _RAT.match(text)
        if not m:
            raise ParseError(f"expected a residue, got {text.strip()!r}", text, 0)
        num = Fp(int(m.group(1)), self.p)
        if m.group(2):
            den = Fp(int(m.group(2)), self.p)
            if not den:
                raise ParseError(f"denominator vanishes mod {self.p}", text, text.index("/") + 1)
            return num / den
        return num

    def inverse(self, c):
        return c.inverse()

    def random(self, rng, nonzero=True):
        lo = 1 if nonzero else 0
        return Fp(rng.randint(lo, self.p - 1), self.p)


# -- session ----------------------------------------------------------------

@dataclass(frozen=True)
class Algebra:
    """The (value group, coefficient field) pair fixed for one session."""

    group: ValueGroup
    field: CoefficientField

    def exponent(self, x) -> GroupElement:
        """Coerce a Python number or pair into the session's group."""
        if isinstance(x, str):
            return self.group.parse(x)
        if self.group.kind == "rat" and isinstance(x, int):
            return Fraction(x)
        if self.group.kind == "lex2" and isinstance(x, tuple) and not isinstance(x, Lex2):
            return Lex2(*x)
        return self.group.check(x)

    def coefficient(self, c) -> Coefficient:
        if isinstance(c, str):
            return self.field.parse(c)
        if self.field.kind == "rat" and isinstance(c, int):
            return Fraction(c)
        if self.field.kind == "fp" and isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            c = Fraction(c)
            return Fp(c.numerator, self.field.p) / Fp(c.denominator, self.field.p)
        return self.field.check(c)

    def __str__(self):
        f = self.field.kind if self.field.kind == "rat" else f"fp({self.field.p})"
        return f"{self.group.kind}/{f}"


_GROUPS = {"int": IntegerGroup, "rat": RationalGroup, "lex2": Lex2Group}


def make_algebra(group: str = "rat", field: str = "rat", modulus: int | None = None) -> Algebra:
    try:
        g = _GROUPS[group]()
    except KeyError:
        raise UsageError(f"unknown value group {group!r}; choose int, rat or lex2") from None
    if field == "rat":
        k = RationalField()
    elif field == "fp":
        if modulus is None:
            raise UsageError("the prime field needs a modulus")
        k = PrimeField(modulus)
    else:
        raise UsageError(f"unknown coefficient field {field!r}; choose rat or fp")
    return Algebra(g, k)


# -- free functions with variant checks ----------------------------------------

def _same_group_variant(a, b):
    if type(a) is not type(b) or type(a) not in (int, Fraction, Lex2):
        raise UsageError(f"group elements of different kinds: {a!r}, {b!r}")


def group_add(a: GroupElement, b: GroupElement) -> GroupElement:
    _same_group_variant(a, b)
    return a + b


def group_neg(a: GroupElement) -> GroupElement:
    return -a


def group_compare(a: GroupElement, b: GroupElement) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    _same_group_variant(a, b)
    return (a > b) - (a < b)


def _same_field_variant(a, b):
    if type(a) is not type(b) or (type(a) is Fp and a.p != b.p) or type(a) not in (Fraction, Fp):
        raise UsageError(f"coefficients of different kinds: {a!r}, {b!r}")


def field_add(a: Coefficient, b: Coefficient) -> Coefficient:
    _same_field_variant(a, b)
    return a + b


def field_mul(a: Coefficient, b: Coefficient) -> Coefficient:
    _same_field_variant(a, b)
    return a * b


def field_neg(a: Coefficient) -> Coefficient:
    return -a


def field_inverse(c: Coefficient) -> Coefficient:
    if isinstance(c, Fp):
        return c.inverse()
    if type(c) is not Fraction:
        raise UsageError(f"{c!r} is not a coefficient")
    if c == 0:
        raise ZeroDivisionError("0 has no rational inverse")
    return 1 / c

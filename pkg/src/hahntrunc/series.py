"""Finitely supported Hahn series over an :class:`~hahntrunc.algebra.Algebra`.

A :class:`Series` is an immutable, canonical list of ``(exponent, coefficient)``
terms with strictly increasing exponents and nonzero coefficients.  The zero
series has no terms.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .algebra import Algebra, Coefficient, GroupElement
from .errors import ParseError, UsageError

__all__ = [
    "INFINITY", "Series", "Predicates", "Asymptotic",
    "parse_series", "format_series", "series_to_json", "series_from_json",
    "monomial", "constant", "valuation", "truncate", "truncate_at_monomial",
    "decompose", "predicates", "asymptotic", "preceq", "prec", "asymp",
    "invert_truncated", "random_series",
]


class _Infinity:
    """The valuation of the zero series: above every group element."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = _Infinity()


def _exp_key(term):
    return term[0]


class Series:
    """A finitely supported Hahn series ``sum c * t^e``."""

    __slots__ = ("algebra", "terms", "_exps")

    def __init__(self, algebra: Algebra, terms: Iterable[tuple] = ()):
        acc = {}
        zero = algebra.field.zero
        for e, c in terms:
            e = algebra.exponent(e)
            c = algebra.coefficient(c)
            acc[e] = acc.get(e, zero) + c
        self._set(algebra, sorted(((e, c) for e, c in acc.items() if c), key=_exp_key))

    @classmethod
    def _canonical(cls, algebra, terms):
        # trusted constructor: terms already sorted, deduplicated and nonzero
        obj = object.__new__(cls)
        obj._set(algebra, terms)
        return obj

    def _set(self, algebra, terms):
        self.algebra = algebra
        self.terms = tuple(terms)
        self._exps = tuple(e for e, _ in self.terms)

    # -- inspection ----------------------------------------------------------

    @property
    def support(self) -> tuple:
        return self._exps

    def coefficient(self, e) -> Coefficient:
        i = bisect.bisect_left(self._exps, e)
        if i < len(self._exps) and self._exps[i] == e:
            return self.terms[i][1]
        return self.algebra.field.zero

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def valuation(self):
        return self._exps[0] if self._exps else INFINITY

    def truncate(self, delta) -> Series:
        """The terms with exponent strictly below ``delta``."""
        delta = self.algebra.exponent(delta)
        i = bisect.bisect_left(self._exps, delta)
        if i == len(self.terms):
            return self
        return Series._canonical(self.algebra, self.terms[:i])

    def shift(self, e, c=None) -> Series:
        """Multiply by the monomial ``c * t^e`` (``c`` defaults to 1)."""
        if c is None:
            return Series._canonical(self.algebra, [(x + e, a) for x, a in self.terms])
        if not c:
            return Series._canonical(self.algebra, ())
        return Series._canonical(self.algebra, [(x + e, a * c) for x, a in self.terms])

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Series):
            return False
        if other.algebra != self.algebra:
            raise UsageError(f"series over {self.algebra} and {other.algebra} cannot be combined")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        a, b = self.terms, other.terms
        if not a:
            return other
        if not b:
            return self
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            ea, eb = a[i][0], b[j][0]
            if ea < eb:
                out.append(a[i])
                i += 1
            elif eb < ea:
                out.append(b[j])
                j += 1
            else:
                c = a[i][1] + b[j][1]
                if c:
                    out.append((ea, c))
                i += 1
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Series._canonical(self.algebra, out)

    def __neg__(self):
        return Series._canonical(self.algebra, [(e, -c) for e, c in self.terms])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not self._check(other):
            return NotImplemented
        if not self.terms or not other.terms:
            return Series._canonical(self.algebra, ())
        if len(other.terms) == 1:
            e, c = other.terms[0]
            return self.shift(e, c)
        if len(self.terms) == 1:
            e, c = self.terms[0]
            return other.shift(e, c)
        acc = {}
        get = acc.get
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = ea + eb
                prev = get(e)
                acc[e] = ca * cb if prev is None else prev + ca * cb
        return Series._canonical(self.algebra, sorted(((e, c) for e, c in acc.items() if c), key=_exp_key))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self.terms) != 1:
                raise UsageError("only monomials c*t^e have exact negative powers")
            e, c = self.terms[0]
            inv = self.algebra.field.inverse(c)
            return Series._canonical(self.algebra, [(e * n, inv ** -n)])
        result = constant(self.algebra, self.algebra.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"Series({format_series(self)!r})"


# -- construction -----------------------------------------------------------

def monomial(algebra: Algebra, e, c=None) -> Series:
    """``c * t^e``; the coefficient defaults to 1."""
    e = algebra.exponent(e)
    c = algebra.field.one if c is None else algebra.coefficient(c)
    return Series._canonical(algebra, [(e, c)] if c else [])


def constant(algebra: Algebra, c) -> Series:
    return monomial(algebra, algebra.group.zero, c)


def random_series(algebra: Algebra, rng, max_terms: int = 8, min_terms: int = 0) -> Series:
    n = rng.randint(min_terms, max_terms)
    return Series(algebra, [(algebra.group.random(rng), algebra.field.random(rng)) for _ in range(n)])


# -- text and JSON forms ----------------------------------------------------

_COEFF = re.compile(r"-?\d+(?:\s*/\s*\d+)?")
_UINT = re.compile(r"\d+")


class _SeriesParser:
    def __init__(self, text, algebra):
        self.text = text
        self.alg = algebra
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        terms = []
        sign = 1
        if self.peek() == "-" and not _COEFF.match(self.text, self.pos):
            sign = -1
            self.pos += 1
        elif self.peek() == "+":
            self.pos += 1
        terms.append(self.term(sign))
        while True:
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.error(f"expected '+' or '-', found {ch!r}")
            self.pos += 1
            terms.append(self.term(-1 if ch == "-" else 1))
        return Series(self.alg, terms)

    def term(self, sign):
        ch = self.peek()
        if ch == "t":
            e, c = self.monomial(), self.alg.field.one
        elif ch.isdigit() or ch == "-":
            m = _COEFF.match(self.text, self.pos)
            if not m:
                self.error("expected a coefficient")
            c = self._sub(self.alg.field.parse, m.group(), m.start())
            self.pos = m.end()
            if self.peek() == "*":
                self.pos += 1
                if self.peek() != "t":
                    self.error("expected 't' after '*'")
                e = self.monomial()
            else:
                e = self.alg.group.zero
        elif not ch:
            self.error("unexpected end of input, expected a term")
        else:
            self.error(f"unexpected character {ch!r}")
        return e, (-c if sign < 0 else c)

    def monomial(self):
        start = self.pos
        self.pos += 1  # 't'
        if self.peek() != "^":
            if self.alg.group.kind == "lex2":
                self.error("bare 't' needs an explicit exponent over the lex2 group", start)
            return self.alg.exponent(1)
        self.pos += 1
        if self.peek() == "(":
            open_at = self.pos
            depth = 0
            for i in range(self.pos, len(self.text)):
                if self.text[i] == "(":
                    depth += 1
                elif self.text[i] == ")":
                    depth -= 1
                    if depth == 0:
                        break
            else:
                self.error("unbalanced '(' in exponent", open_at)
            inner = self.text[open_at + 1:i]
            self.pos = i + 1
            return self._sub(self.alg.group.parse, inner, open_at + 1)
        m = _UINT.match(self.text, self.pos)
        if not m:
            self.error("expected an exponent after '^'")
        self.pos = m.end()
        return self._sub(self.alg.group.parse, m.group(), m.start())

    def _sub(self, parse, fragment, offset):
        try:
            return parse(fragment)
        except ParseError as exc:
            raise ParseError(exc.message, self.text, offset + exc.pos) from None


def parse_series(text: str, algebra: Algebra) -> Series:
    """Read ``3*t^(-2) + 1 + 5*t^(1/2)``-style text; like terms are collected."""
    return _SeriesParser(text, algebra).parse()


def _format_term(alg, e, c):
    if e == alg.group.zero:
        return alg.field.format(c)
    mono = f"t^({alg.group.format(e)})"
    if c == alg.field.one:
        return mono
    return f"{alg.field.format(c)}*{mono}"


def format_series(f: Series) -> str:
    if not f.terms:
        return "0"
    alg = f.algebra
    parts = []
    for i, (e, c) in enumerate(f.terms):
        neg = alg.field.is_negative(c)
        body = _format_term(alg, e, -c if neg else c)
        if i == 0:
            parts.append("-" + body if neg else body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def series_to_json(f: Series) -> dict:
    alg = f.algebra
    return {"terms": [{"exp": alg.group.format(e), "coeff": alg.field.format(c)} for e, c in f.terms]}


def series_from_json(obj: dict, algebra: Algebra) -> Series:
    try:
        raw = [(algebra.group.parse(t["exp"]), algebra.field.parse(t["coeff"])) for t in obj["terms"]]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed series JSON: {exc}") from None
    for (a, _), (b, _) in zip(raw, raw[1:]):
        if not a < b:
            raise UsageError("series JSON exponents must be strictly increasing")
    if any(not c for _, c in raw):
        raise UsageError("series JSON contains a zero coefficient")
    return Series._canonical(algebra, raw)


# -- valuation-theoretic operations -----------------------------------------

def valuation(f: Series):
    """Least support exponent, or :data:`INFINITY` for the zero series."""
    return f.valuation()


def truncate(f: Series, delta: GroupElement) -> Series:
    return f.truncate(delta)


def is_monomial(f: Series) -> bool:
    return len(f.terms) == 1 and f.terms[0][1] == f.algebra.field.one


def truncate_at_monomial(f: Series, m: Series) -> Series:
    """Truncation at the exponent of the monomial ``m = t^e``."""
    if not is_monomial(m):
        raise UsageError(f"{m} is not a monomial t^e")
    return f.truncate(m.terms[0][0])


def decompose(f: Series):
    """Split into (purely infinite part, constant coefficient, infinitesimal part)."""
    zero = f.algebra.group.zero
    i = bisect.bisect_left(f._exps, zero)
    j = i
    const = f.algebra.field.zero
    if j < len(f.terms) and f._exps[j] == zero:
        const = f.terms[j][1]
        j += 1
    alg = f.algebra
    return Series._canonical(alg, f.terms[:i]), const, Series._canonical(alg, f.terms[j:])


@dataclass(frozen=True)
class Predicates:
    in_O: bool
    in_little_o: bool
    in_V: bool
    is_monomial: bool
    in_k: bool


def predicates(f: Series) -> Predicates:
    zero = f.algebra.group.zero
    v = f.valuation()
    top = f._exps[-1] if f._exps else None
    return Predicates(
        in_O=v >= zero,
        in_little_o=v > zero,
        in_V=top is None or top < zero,
        is_monomial=is_monomial(f),
        in_k=f._exps in ((), (zero,)),
    )


class Asymptotic(Enum):
    PREC = "prec"
    ASYMP = "asymp"
    SUCC = "succ"


def preceq(f: Series, g: Series) -> bool:
    """``f = g*h`` for some bounded ``h``; decided by comparing valuations."""
    if f.is_zero():
        return True
    return not g.is_zero() and f.valuation() >= g.valuation()


def prec(f: Series, g: Series) -> bool:
    return preceq(f, g) and not preceq(g, f)


def asymp(f: Series, g: Series) -> bool:
    return preceq(f, g) and preceq(g, f)


def asymptotic(f: Series, g: Series) -> Asymptotic:
    fg, gf = preceq(f, g), preceq(g, f)
    if fg and gf:
        return Asymptotic.ASYMP
    return Asymptotic.PREC if fg else Asymptotic.SUCC


def invert_truncated(f: Series, bound: GroupElement) -> Series:
    """The truncation of ``1/f`` that is exact up to relative precision ``bound``.

    Returns ``g`` with ``v(f*g - 1) >= bound`` and ``supp(g) < bound - v(f)``:
    factor ``f = c*t^v*(1 + eps)`` with ``v(eps) > 0`` and sum the Neumann
    series of ``1/(1 + eps)`` below ``bound``.
    """
    if f.is_zero():
        raise ZeroDivisionError("the zero series has no inverse")
    alg = f.algebra
    v, c = f.terms[0]
    c_inv = alg.field.inverse(c)
    one = constant(alg, alg.field.one)
    eps = f.shift(-v, c_inv) - one
    neumann = one.truncate(bound)
    if eps:
        k_max = alg.group.multiples_needed(eps.valuation(), bound)
        if k_max is None:
            raise UsageError(
                f"1/({f}) truncated at {alg.group.format(bound)} has infinite support")
        power = one
        minus_eps = -eps
        for _ in range(1, k_max):
            power = (power * minus_eps).truncate(bound)
            if not power:
                break
            neumann = neumann + power
    return neumann.shift(-v, c_inv)

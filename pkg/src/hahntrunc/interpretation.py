"""Definable relations on a Hahn field with truncation, and a finite check that
powers of a small monomial together with support classes encode
``(N, P(N); +, in)``.

``rel_R(a, b)`` holds when ``a`` is a monomial ``t^g`` with ``g`` in the
support of ``b``; it is computed from truncation and the asymptotic relation
only, with a direct support lookup kept as an independent oracle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .algebra import GroupElement
from .errors import UsageError
from .series import (
    Series, asymp, format_series, is_monomial, monomial, predicates,
    truncate_at_monomial, valuation,
)

__all__ = [
    "rel_R", "rel_R_oracle", "supp_equiv", "rel_E",
    "is_truncation_at_one", "is_truncation_at_monomial",
    "InterpretationConfig", "iota", "encode_subset", "approximant",
    "check_interpretation", "two_sorted_T", "two_sorted_R",
    "CoeffFieldVerdict", "coeff_field_test",
]


def rel_R(a: Series, b: Series) -> bool:
    """``a`` is a monomial and ``b - b|_a`` has the same order as ``a``."""
    if not is_monomial(a):
        return False
    return asymp(b - truncate_at_monomial(b, a), a)


def rel_R_oracle(a: Series, b: Series) -> bool:
    """Direct support lookup; the reference for :func:`rel_R`."""
    return is_monomial(a) and a.terms[0][0] in b.support


def supp_equiv(f: Series, g: Series) -> bool:
    return f.support == g.support


def rel_E(m: Series, g: Series) -> bool:
    """Membership of a monomial in a support class; depends on ``g`` only up to :func:`supp_equiv`."""
    return rel_R(m, g)


def is_truncation_at_one(f: Series, v: Series) -> bool:
    """``f|_1 = v`` stated without truncation: ``v`` purely infinite and ``f - v`` bounded."""
    return predicates(v).in_V and predicates(f - v).in_O


def is_truncation_at_monomial(f: Series, m: Series, g: Series) -> bool:
    """``f|_m = g`` reduced to truncation at one: ``(f/m)|_1 = g/m``."""
    if not is_monomial(m):
        raise UsageError(f"{m} is not a monomial t^e")
    inv = m ** -1
    return is_truncation_at_one(inv * f, inv * g)


@dataclass(frozen=True)
class InterpretationConfig:
    """Base monomial ``n`` (infinitesimal) and the number of its powers in play."""

    base: Series
    depth: int

    def __post_init__(self):
        if not is_monomial(self.base):
            raise UsageError(f"base {self.base} is not a monomial t^e")
        alg = self.base.algebra
        if not valuation(self.base) > alg.group.zero:
            raise UsageError(f"base {self.base} must be infinitesimal (positive exponent)")
        if isinstance(self.depth, bool) or not isinstance(self.depth, int) or self.depth < 1:
            raise UsageError("depth must be a positive integer")

    @property
    def algebra(self):
        return self.base.algebra


def iota(n: int, cfg: InterpretationConfig) -> Series:
    """``base**n``."""
    if isinstance(n, bool) or not isinstance(n, int) or not 0 <= n < cfg.depth:
        raise UsageError(f"index {n!r} outside [0, {cfg.depth})")
    return cfg.base ** n


def encode_subset(J, cfg: InterpretationConfig) -> Series:
    """The series with coefficient 1 at each ``base**j``, ``j`` in ``J``."""
    step = cfg.base.terms[0][0]
    one = cfg.algebra.field.one
    terms = []
    for j in sorted(set(J)):
        if isinstance(j, bool) or not isinstance(j, int) or not 0 <= j < cfg.depth:
            raise UsageError(f"index {j!r} outside [0, {cfg.depth})")
        terms.append((step * j, one))
    return Series._canonical(cfg.algebra, terms)


def approximant(cfg: InterpretationConfig) -> Series:
    """Partial sum of all ``depth`` powers of the base."""
    return encode_subset(range(cfg.depth), cfg)


def two_sorted_T(f: Series, gamma: GroupElement) -> Series:
    return f.truncate(gamma)


def two_sorted_R(gamma: GroupElement, f: Series) -> bool:
    """``v(f - T(f, gamma)) = gamma``."""
    gamma = f.algebra.exponent(gamma)
    return valuation(f - two_sorted_T(f, gamma)) == gamma


def _check(name, counterexample=None, **counts):
    entry = {"name": name, "pass": counterexample is None}
    entry.update(counts)
    if counterexample is not None:
        entry["counterexample"] = counterexample
    return entry


# subset enumeration is exhaustive up to this depth, sampled beyond it
EXHAUSTIVE_DEPTH = 12


def _random_subset(rng, n):
    return frozenset(i for i in range(n) if rng.random() < 0.5)


def check_interpretation(cfg: InterpretationConfig, trials: int = 200, seed: int = 0,
                         exhaustive: bool | None = None) -> dict:
    """Finite checks that ``iota`` and ``encode_subset`` give an isomorphic copy.

    Checks additivity of ``iota``, its injectivity, membership transfer
    through ``rel_E`` (over every subset when ``exhaustive``, otherwise over
    ``trials`` random subsets, each against every index), invariance of
    ``rel_E`` under rescaling coefficients, and the same transfer through the
    two-sorted relation.  Failures carry the first counterexample found.
    """
    N = cfg.depth
    rng = random.Random(seed)
    if exhaustive is None:
        exhaustive = N <= EXHAUSTIVE_DEPTH
    powers = [iota(n, cfg) for n in range(N)]
    checks = []

    bad, pairs = None, 0
    for m in range(N):
        for n in range(N - m):
            pairs += 1
            if powers[m + n] != powers[m] * powers[n]:
                bad = bad or {"m": m, "n": n}
    checks.append(_check("iota additive to multiplicative", bad, cases=pairs))

    bad = None
    seen = {}
    for n, p in enumerate(powers):
        if p in seen:
            bad = bad or {"m": seen[p], "n": n}
        seen.setdefault(p, n)
    checks.append(_check("iota injective", bad, cases=N))

    if exhaustive:
        subsets = (frozenset(c) for r in range(N + 1) for c in combinations(range(N), r))
    else:
        subsets = (_random_subset(rng, N) for _ in range(trials))
    bad, cases, classes = None, 0, 0
    field = cfg.algebra.field
    invariance_bad, invariance_cases = None, 0
    two_sorted_bad = None
    step = cfg.base.terms[0][0]
    for J in subsets:
        classes += 1
        g = encode_subset(J, cfg)
        for i in range(N):
            cases += 1
            if rel_E(powers[i], g) != (i in J):
                bad = bad or {"i": i, "J": sorted(J)}
            if two_sorted_R(step * i, g) != (i in J):
                two_sorted_bad = two_sorted_bad or {"i": i, "J": sorted(J)}
        if invariance_cases < trials:
            scaled = Series._canonical(cfg.algebra, [(e, field.random(rng) or field.one) for e, _ in g.terms])
            i = rng.randrange(N)
            invariance_cases += 1
            if rel_E(powers[i], g) != rel_E(powers[i], scaled):
                invariance_bad = invariance_bad or {"i": i, "g": format_series(g), "g'": format_series(scaled)}
    checks.append(_check("membership transfer", bad, subsets=classes, cases=cases,
                         exhaustive=exhaustive))
    checks.append(_check("rel_E invariant under support equivalence", invariance_bad,
                         cases=invariance_cases))
    checks.append(_check("two-sorted membership transfer", two_sorted_bad, cases=cases))
    return {"base": format_series(cfg.base), "depth": N, "seed": seed,
            "pass": all(c["pass"] for c in checks), "checks": checks}


@dataclass(frozen=True)
class CoeffFieldVerdict:
    verdict: bool
    witness: Series | None = None


def coeff_field_test(f: Series, probes=()) -> CoeffFieldVerdict:
    """Decide whether bounded ``f`` maps purely infinite series to purely infinite series.

    That happens exactly when ``f`` is a constant.  A constant is checked
    against every probe; a non-constant ``f`` gets the witness
    ``t^(-g)``, ``g`` its largest exponent, since ``f * t^(-g)`` then has a
    constant term.
    """
    if not predicates(f).in_O:
        raise UsageError(f"{f} is not bounded (negative exponent present)")
    probes = list(probes)
    for p in probes:
        if p.algebra != f.algebra:
            raise UsageError("probe and series come from different algebras")
        if not predicates(p).in_V:
            raise UsageError(f"probe {p} is not purely infinite")
    if predicates(f).in_k:
        for p in probes:
            if not predicates(f * p).in_V:  # pragma: no cover - cannot happen for constants
                raise AssertionError(f"constant {f} moved {p} out of V")
        return CoeffFieldVerdict(True)
    top = f.terms[-1][0]
    witness = monomial(f.algebra, -top)
    if predicates(f * witness).in_V:  # pragma: no cover - the constant term is always present
        raise AssertionError(f"witness {witness} failed for {f}")
    return CoeffFieldVerdict(False, witness)

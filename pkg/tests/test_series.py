import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hahntrunc.algebra import Fp, Lex2, make_algebra
from hahntrunc.errors import ParseError, UsageError
from hahntrunc.series import (
    INFINITY, Asymptotic, Series, asymptotic, constant, decompose, format_series,
    invert_truncated, is_monomial, monomial, parse_series, prec, preceq, predicates,
    random_series, series_from_json, series_to_json, truncate, truncate_at_monomial,
    valuation,
)

Q = make_algebra("rat", "rat")
ALGEBRAS = [make_algebra(g, f, 7 if f == "fp" else None)
            for g in ("int", "rat", "lex2") for f in ("rat", "fp")]


def s(text, alg=Q):
    return parse_series(text, alg)


def nonzero_series(alg, rng, max_terms=4):
    while True:
        f = random_series(alg, rng, max_terms, min_terms=1)
        if f:
            return f


# -- examples ----------------------------------------------------------------

def test_parse_examples():
    f = s("3*t^(-2) + 1 + 5*t^(1/2)")
    assert f.terms == ((Fraction(-2), 3), (Fraction(0), 1), (Fraction(1, 2), 5))
    assert s("t^1 + t^1").terms == ((Fraction(1), 2),)
    assert s("0").is_zero()


def test_add_examples():
    assert s("1+t") + s("1-t") == s("2")
    f = s("t^(-1) + 3*t^(2/3)")
    assert f + Series(Q) == f
    assert (s("t^(1/2)") + s("-t^(1/2)")).is_zero()


def test_mul_examples():
    assert format_series(s("1+t") * s("1-t")) == "1 - t^(2)"
    assert s("t^(1/2)") * s("t^(1/3)") == s("t^(5/6)")
    assert (s("1 + t") * Series(Q)).is_zero()


def test_valuation_examples():
    assert valuation(s("t^2 + t^3")) == 2
    assert valuation(Series(Q)) is INFINITY
    assert valuation(s("5*t^(-1/2) + 7")) == Fraction(-1, 2)


def test_truncate_examples():
    f = s("t^(-1) + 1 + t")
    assert truncate(f, 0) == s("t^(-1)")
    assert truncate(f, 2) == f
    assert truncate(f, -5).is_zero()


def test_truncate_at_monomial_examples():
    f = s("1 + t + t^2")
    assert truncate_at_monomial(f, s("t")) == s("1")
    assert truncate_at_monomial(f, s("t^3")) == f
    g = s("t^(-2) + t^(-1) + 1")
    assert truncate_at_monomial(g, s("1")) == s("t^(-2) + t^(-1)")
    with pytest.raises(UsageError):
        truncate_at_monomial(f, s("2*t"))


def test_decompose_examples():
    assert decompose(s("t^(-1) + 2 + t")) == (s("t^(-1)"), 2, s("t"))
    assert decompose(Series(Q)) == (Series(Q), 0, Series(Q))
    assert decompose(s("3*t^(1/2)")) == (Series(Q), 0, s("3*t^(1/2)"))


def test_predicate_examples():
    p = predicates(s("1 + t"))
    assert p.in_O and not p.in_V and not p.is_monomial
    p = predicates(s("t^(-3)"))
    assert p.in_V and p.is_monomial and not p.in_O
    p = predicates(Series(Q))
    assert p.in_O and p.in_V and not p.is_monomial and p.in_little_o and p.in_k


def test_asymptotic_examples():
    assert asymptotic(s("t^2"), s("t")) is Asymptotic.PREC
    assert asymptotic(s("2*t + t^3"), s("5*t")) is Asymptotic.ASYMP
    assert asymptotic(s("t"), Series(Q)) is Asymptotic.SUCC
    assert prec(Series(Q), s("t"))
    assert asymptotic(Series(Q), Series(Q)) is Asymptotic.ASYMP


def test_invert_examples():
    g = invert_truncated(s("1 - t"), 4)
    assert g == s("1 + t + t^2 + t^3")
    assert s("1 - t") * g == s("1 - t^4")
    assert invert_truncated(s("t"), 1) == s("t^(-1)")
    assert invert_truncated(s("2"), 1) == s("1/2")
    with pytest.raises(ZeroDivisionError):
        invert_truncated(Series(Q), 1)


def test_invert_lex2_infinite_support():
    L = make_algebra("lex2", "rat")
    f = s("1 + t^((0,1))", L)
    with pytest.raises(UsageError):
        invert_truncated(f, Lex2(1, 0))
    assert invert_truncated(f, Lex2(0, 3)) == s("1 - t^((0,1)) + t^((0,2))", L)


# -- text and JSON -----------------------------------------------------------

@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_print_parse_roundtrip(alg):
    rng = random.Random(str(alg))
    for _ in range(200):
        f = random_series(alg, rng)
        assert parse_series(format_series(f), alg) == f
        assert series_from_json(series_to_json(f), alg) == f


def test_json_schema_shape():
    assert series_to_json(s("3*t^(-2) + 1/2")) == {
        "terms": [{"exp": "-2", "coeff": "3"}, {"exp": "0", "coeff": "1/2"}]}


def test_json_rejects_unsorted_and_zero():
    with pytest.raises(UsageError):
        series_from_json({"terms": [{"exp": "1", "coeff": "1"}, {"exp": "0", "coeff": "1"}]}, Q)
    with pytest.raises(UsageError):
        series_from_json({"terms": [{"exp": "1", "coeff": "0"}]}, Q)


@pytest.mark.parametrize("text,col", [("1 + * t", 5), ("t^(1/0)", 6), ("3*t^", 5), ("2 t", 3)])
def test_parse_errors_carry_position(text, col):
    with pytest.raises(ParseError) as err:
        s(text)
    assert err.value.pos + 1 == col
    assert "^" in err.value.annotated()


def test_parse_over_prime_field():
    F = make_algebra("int", "fp", 7)
    f = s("3*t^2 + 1/2", F)
    assert f.coefficient(2) == Fp(3, 7) and f.coefficient(0) == Fp(4, 7)
    assert s("7*t", F).is_zero()


def test_algebras_do_not_mix():
    with pytest.raises(UsageError):
        s("t") + s("t", make_algebra("int"))


# -- properties --------------------------------------------------------------

@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_ring_and_valuation_axioms(alg):
    rng = random.Random(f"ring/{alg}")
    one, zero = constant(alg, 1), Series(alg)
    for _ in range(500):
        f, g, h = (random_series(alg, rng) for _ in range(3))
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f and f + g == g + f
        assert f * one == f and f + zero == f and (f - f).is_zero()
        assert (valuation(f) is INFINITY) == f.is_zero()
        if f and g:
            assert valuation(f * g) == valuation(f) + valuation(g)
        assert valuation(f + g) >= min(valuation(f), valuation(g))


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_truncation_identities(alg):
    rng = random.Random(f"trunc/{alg}")
    for _ in range(300):
        f = random_series(alg, rng)
        d = alg.group.random(rng)
        low = truncate(f, d)
        high = f - low
        assert low + high == f
        assert all(e < d for e in low.support) and all(e >= d for e in high.support)
        assert truncate(low, d) == low


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_decomposition_is_direct_sum(alg):
    rng = random.Random(f"decomp/{alg}")
    zero = alg.group.zero
    for _ in range(300):
        f = random_series(alg, rng)
        p, c, eps = decompose(f)
        assert p + constant(alg, c) + eps == f
        assert predicates(p).in_V and predicates(f - p).in_O
        assert all(e > zero for e in eps.support)
        assert p == truncate(f, zero)


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_truncation_at_monomial_reduces_to_zero(alg):
    rng = random.Random(f"mono/{alg}")
    zero = alg.group.zero
    for _ in range(500):
        f = random_series(alg, rng)
        m = monomial(alg, alg.group.random(rng))
        inv = m ** -1
        assert truncate_at_monomial(f, m) == m * truncate(inv * f, zero)


@pytest.mark.parametrize("alg", [a for a in ALGEBRAS if a.group.kind != "lex2"], ids=str)
def test_invert_truncated_precision(alg):
    rng = random.Random(f"inv/{alg}")
    one = constant(alg, 1)
    for _ in range(200):
        f = nonzero_series(alg, rng)
        b = alg.exponent(rng.randint(1, 4))
        g = invert_truncated(f, b)
        assert valuation(f * g - one) >= b
        assert all(e < b - valuation(f) for e in g.support)


def test_preceq_matches_witness():
    rng = random.Random(11)
    for _ in range(200):
        f, g = random_series(Q, rng, 4), nonzero_series(Q, rng)
        h = f * invert_truncated(g, 8)  # f/g up to relative precision 8
        if f:
            assert valuation(f - g * h) >= valuation(f) + 8
        assert preceq(f, g) == predicates(h).in_O


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 5), st.integers(-9, 9)), max_size=8))
def test_normalization_collects_like_terms(raw):
    terms = [(Fraction(n, d), c) for n, d, c in raw]
    f = Series(Q, terms)
    expected = {}
    for e, c in terms:
        expected[e] = expected.get(e, 0) + c
    assert dict(f.terms) == {e: c for e, c in expected.items() if c}
    assert list(f.support) == sorted(f.support)


def test_is_monomial_requires_unit_coefficient():
    assert is_monomial(s("t^(1/2)"))
    assert not is_monomial(s("2*t"))
    assert not is_monomial(s("t + t^2"))
    assert not is_monomial(Series(Q))

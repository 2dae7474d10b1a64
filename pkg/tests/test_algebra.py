import random
from fractions import Fraction

import pytest

from hahntrunc.algebra import (
    Fp, Lex2, field_add, field_inverse, field_mul, field_neg, group_add, group_compare,
    group_neg, make_algebra,
)
from hahntrunc.errors import ParseError, UsageError

GROUPS = ("int", "rat", "lex2")


def test_group_add_examples():
    assert group_add(2, 3) == 5
    assert group_add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert group_add(Lex2(1, 5), Lex2(0, -5)) == Lex2(1, 0)


def test_group_compare_examples():
    assert group_compare(Lex2(0, 100), Lex2(1, -100)) == -1
    assert group_compare(Fraction(2, 3), Fraction(3, 4)) == -1
    assert group_compare(7, 7) == 0


def test_field_inverse_examples():
    assert field_inverse(Fraction(3, 4)) == Fraction(4, 3)
    assert field_inverse(Fp(3, 7)) == Fp(5, 7)
    assert field_inverse(Fraction(1)) == 1


def test_field_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        field_inverse(Fraction(0))
    with pytest.raises(ZeroDivisionError):
        field_inverse(Fp(0, 7))


def test_variant_mismatch():
    with pytest.raises(UsageError):
        group_add(1, Fraction(1))
    with pytest.raises(UsageError):
        group_compare(Lex2(0, 1), 1)
    with pytest.raises(UsageError):
        field_add(Fp(1, 5), Fp(1, 7))
    with pytest.raises(UsageError):
        field_mul(Fraction(1), Fp(1, 7))


def test_group_neg_cancels():
    for a in (5, Fraction(-2, 3), Lex2(4, -9)):
        zero = group_add(a, group_neg(a))
        assert not any(zero) if isinstance(zero, Lex2) else zero == 0


@pytest.mark.parametrize("kind", GROUPS)
def test_group_laws_random(kind):
    alg = make_algebra(kind)
    g = alg.group
    rng = random.Random(kind)
    for _ in range(1000):
        a, b, c = g.random(rng), g.random(rng), g.random(rng)
        assert group_add(group_add(a, b), c) == group_add(a, group_add(b, c))
        assert group_add(a, b) == group_add(b, a)
        assert group_add(a, g.zero) == a
        assert group_add(a, group_neg(a)) == g.zero
        assert (a < b) == (group_add(a, c) < group_add(b, c))
        assert sum(x < y for x, y in ((a, b), (b, a))) + (a == b) == 1


@pytest.mark.parametrize("field", [("rat", None), ("fp", 7), ("fp", 101)])
def test_field_laws_random(field):
    kind, p = field
    k = make_algebra("int", kind, p).field
    rng = random.Random(str(field))
    for _ in range(1000):
        a, b, c = k.random(rng), k.random(rng), k.random(rng, nonzero=False)
        assert field_add(field_add(a, b), c) == field_add(a, field_add(b, c))
        assert field_mul(field_mul(a, b), c) == field_mul(a, field_mul(b, c))
        assert field_mul(a, b) == field_mul(b, a)
        assert field_mul(a, field_add(b, c)) == field_add(field_mul(a, b), field_mul(a, c))
        assert field_add(a, field_neg(a)) == k.zero
        assert field_mul(a, field_inverse(a)) == k.one
        assert field_mul(a, k.one) == a


def test_rationals_stay_normalized():
    alg = make_algebra("rat")
    x = alg.exponent("-6/4")
    assert x == Fraction(-3, 2) and x.denominator == 2


def test_parse_and_format_roundtrip():
    for kind, text in (("int", "-12"), ("rat", "3/7"), ("lex2", "(1,-2)")):
        g = make_algebra(kind).group
        assert g.format(g.parse(text)) == text


def test_prime_field_rejects_composite():
    with pytest.raises(UsageError):
        make_algebra("int", "fp", 9)
    with pytest.raises(UsageError):
        make_algebra("int", "fp")


def test_unknown_kinds():
    with pytest.raises(UsageError):
        make_algebra("real")
    with pytest.raises(UsageError):
        make_algebra("int", "complex")


def test_bad_literals():
    with pytest.raises(ParseError):
        make_algebra("lex2").group.parse("(1,2")
    with pytest.raises(ParseError):
        make_algebra("int").group.parse("1/2")


def test_fp_coercion_of_fractions():
    alg = make_algebra("int", "fp", 7)
    assert alg.coefficient(Fraction(1, 3)) == Fp(5, 7)
    assert alg.coefficient("2/3") == Fp(3, 7)


def test_lex2_order_big_integers():
    big = 10 ** 40
    assert Lex2(0, big) < Lex2(1, -big)
    assert Lex2(big, 0) > Lex2(big - 1, big)

import random
from fractions import Fraction

import pytest

from hahntrunc.algebra import make_algebra
from hahntrunc.errors import UsageError
from hahntrunc.interpretation import (
    InterpretationConfig, approximant, check_interpretation, coeff_field_test, encode_subset,
    iota, is_truncation_at_monomial, is_truncation_at_one, rel_E, rel_R, rel_R_oracle,
    supp_equiv, two_sorted_R, two_sorted_T,
)
from hahntrunc.series import (
    Series, constant, monomial, parse_series, predicates, random_series, truncate, truncate_at_monomial,
)

Q = make_algebra("rat", "rat")
ALGEBRAS = [make_algebra(g, f, 7 if f == "fp" else None)
            for g in ("int", "rat", "lex2") for f in ("rat", "fp")]


def s(text, alg=Q):
    return parse_series(text, alg)


def cfg(base="t", depth=32):
    return InterpretationConfig(s(base), depth)


# -- definable relations -----------------------------------------------------

def test_rel_R_examples():
    b = s("1 + t + t^2")
    assert rel_R(s("t"), b)
    assert not rel_R(s("t^3"), b)
    assert not rel_R(s("2*t"), b)
    assert not rel_R(s("2*t"), s("2*t"))


def test_supp_equiv_examples():
    assert supp_equiv(s("2 + 3*t"), s("5 + 7*t"))
    assert not supp_equiv(s("t"), s("t^2"))
    assert supp_equiv(Series(Q), Series(Q))


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_rel_R_matches_support_lookup(alg):
    rng = random.Random(f"relR/{alg}")
    for _ in range(300):
        b = random_series(alg, rng)
        if b and rng.random() < 0.5:
            e = rng.choice(b.support)
        else:
            e = alg.group.random(rng)
        a = monomial(alg, e)
        assert rel_R(a, b) == rel_R_oracle(a, b) == (e in b.support)


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_truncation_characterizations(alg):
    rng = random.Random(f"trunc/{alg}")
    zero = alg.group.zero
    for _ in range(200):
        f, g = random_series(alg, rng), random_series(alg, rng)
        assert is_truncation_at_one(f, truncate(f, zero))
        assert is_truncation_at_one(f, g) == (g == truncate(f, zero))
        m = monomial(alg, alg.group.random(rng))
        assert is_truncation_at_monomial(f, m, truncate_at_monomial(f, m))
        assert is_truncation_at_monomial(f, m, g) == (g == truncate_at_monomial(f, m))


def test_truncation_at_monomial_rejects_non_monomial():
    with pytest.raises(UsageError):
        is_truncation_at_monomial(s("t"), s("2*t"), s("0"))


# -- the interpretation of (N, P(N); +, in) ----------------------------------

def test_iota_examples():
    assert iota(0, cfg()) == s("1")
    assert iota(5, cfg()) == s("t^5")
    assert iota(3, cfg("t^(1/2)", 16)) == s("t^(3/2)")


@pytest.mark.parametrize("n", [-1, 32, True, 1.0])
def test_iota_out_of_range(n):
    with pytest.raises(UsageError):
        iota(n, cfg())


def test_encode_subset_examples():
    assert encode_subset(set(), cfg()).is_zero()
    assert encode_subset({1, 3}, cfg()) == s("t + t^3")
    c = cfg(depth=8)
    assert encode_subset(range(8), c) == approximant(c) == sum((iota(n, c) for n in range(8)), Series(Q))
    with pytest.raises(UsageError):
        encode_subset({8}, c)


def test_rel_E_examples():
    c = cfg()
    g = encode_subset({1, 3}, c)
    assert rel_E(iota(3, c), g)
    assert not rel_E(iota(2, c), g)
    assert not rel_E(iota(0, c), Series(Q))


@pytest.mark.parametrize("base,depth", [("t", 32), ("t^(1/2)", 16), ("t", 1), ("t^(3/7)", 5)])
def test_check_interpretation_passes(base, depth):
    report = check_interpretation(cfg(base, depth), trials=200, seed=3)
    assert report["pass"], report
    assert {c["name"] for c in report["checks"]} >= {
        "iota additive to multiplicative", "iota injective", "membership transfer"}


def test_check_interpretation_counts():
    report = check_interpretation(cfg("t", 12), seed=1)
    transfer = next(c for c in report["checks"] if c["name"] == "membership transfer")
    assert transfer["exhaustive"] and transfer["subsets"] == 4096
    assert transfer["cases"] == 4096 * 12
    additive = report["checks"][0]
    assert additive["cases"] == 12 * 13 // 2
    single = check_interpretation(cfg("t", 1))
    assert single["pass"] and single["checks"][0]["cases"] == 1


def test_membership_transfer_exhaustive_at_sixteen():
    report = check_interpretation(cfg("t", 16), exhaustive=True)
    transfer = next(c for c in report["checks"] if c["name"] == "membership transfer")
    assert report["pass"] and transfer["subsets"] == 1 << 16


def test_check_interpretation_is_seeded():
    a = check_interpretation(cfg("t", 20), trials=50, seed=9)
    b = check_interpretation(cfg("t", 20), trials=50, seed=9)
    assert a == b


def test_interpretation_over_other_groups():
    L = make_algebra("lex2", "rat")
    report = check_interpretation(InterpretationConfig(s("t^((0,1))", L), 10), seed=2)
    assert report["pass"]
    F = make_algebra("int", "fp", 5)
    assert check_interpretation(InterpretationConfig(s("t^2", F), 10), seed=2)["pass"]


@pytest.mark.parametrize("base,depth", [("2*t", 4), ("t^(-1)", 4), ("1", 4), ("t", 0)])
def test_config_validation(base, depth):
    with pytest.raises(UsageError):
        cfg(base, depth)


# -- two-sorted variant ------------------------------------------------------

def test_two_sorted_T_is_truncation():
    f = s("t^(-1) + 1 + t")
    for g in (0, 2, -5):
        assert two_sorted_T(f, Fraction(g)) == truncate(f, Fraction(g))


def test_two_sorted_R_examples():
    assert two_sorted_R(Fraction(1), s("1 + t + t^2"))
    assert not two_sorted_R(Fraction(3), s("1 + t"))
    assert not two_sorted_R(Fraction(0), Series(Q))


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_two_sorted_R_matches_support(alg):
    rng = random.Random(f"two/{alg}")
    for _ in range(200):
        f = random_series(alg, rng)
        for e in f.support:
            assert two_sorted_R(e, f)
        probe = alg.group.random(rng)
        assert two_sorted_R(probe, f) == (probe in f.support)


# -- coefficient field -------------------------------------------------------

def test_coeff_field_examples():
    probes = [s("t^(-1)"), s("t^(-1/2)")]
    assert coeff_field_test(s("3"), probes).verdict is True
    assert coeff_field_test(s("3"), probes).witness is None
    v = coeff_field_test(s("1 + t"), probes)
    assert v.verdict is False and v.witness == s("t^(-1)")
    assert s("1 + t") * v.witness == s("t^(-1) + 1")
    assert coeff_field_test(Series(Q)).verdict is True


def test_coeff_field_preconditions():
    with pytest.raises(UsageError):
        coeff_field_test(s("t^(-1)"))
    with pytest.raises(UsageError):
        coeff_field_test(s("1"), [s("1 + t^(-1)")])


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_coeff_field_verdict_matches_constants(alg):
    rng = random.Random(f"coeff/{alg}")
    zero = alg.group.zero
    for _ in range(150):
        if rng.random() < 0.3:
            f = constant(alg, alg.field.random(rng, nonzero=False))
        else:
            f = random_series(alg, rng)
            f = f - truncate(f, zero)  # drop negative exponents to land in O
        probes = [monomial(alg, -abs_exp) for abs_exp in _positive(alg, rng, 3)]
        v = coeff_field_test(f, probes)
        assert v.verdict == predicates(f).in_k
        if not v.verdict:
            assert predicates(v.witness).in_V
            assert not predicates(f * v.witness).in_V


def _positive(alg, rng, k):
    out = []
    while len(out) < k:
        e = alg.group.random(rng)
        if e > alg.group.zero:
            out.append(e)
    return out

"""The acceptance suite: one function per criterion, each returning a
:class:`Result`.  ``selftest`` and the test suite both run these.
"""
from __future__ import annotations

import itertools
import random
import subprocess
import sys
import time
from dataclasses import dataclass, field

from .algebra import make_algebra
from .config import DEFAULT_SEED
from .dividing import (
    TowerCaps, check_shatters, default_sop_universe, ip_opp_instance, sop_chain,
    sop_solution_sets, subset_sum_instance, tp2_grid, verify_claim1, verify_claim2,
    verify_tp2,
)
from .interpretation import (
    InterpretationConfig, check_interpretation, coeff_field_test, is_truncation_at_one,
    is_truncation_at_monomial, rel_R, rel_R_oracle, two_sorted_R,
)
from .logic.arithmetic import DIVISIBILITY, mso_divides, mso_mult
from .logic.evaluator import evaluate
from .series import (
    INFINITY, Series, constant, decompose, monomial, predicates, random_series,
    truncate_at_monomial,
)



@dataclass
class Result:
    key: str
    title: str
    passed: bool
    seconds: float = 0.0
    limit: float | None = None
    details: dict = field(default_factory=dict)

    def line(self, timings: bool = True) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.key} {self.title}"
        if timings:
            text += f" ({self.seconds:.2f}s" + (f" / limit {self.limit:.0f}s)" if self.limit else ")")
        return text

    def to_json(self, timings: bool = True) -> dict:
        out = {"key": self.key, "title": self.title, "pass": self.passed, "details": self.details}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def _timed(key, title, limit, run):
    start = time.perf_counter()
    passed, details = run()
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed >= limit:
        passed = False
        details = dict(details, timeout=f"took {elapsed:.1f}s, limit {limit}s")
    return Result(key, title, passed, elapsed, limit, details)


ALGEBRAS = [(g, f) for g in ("int", "rat", "lex2") for f in ("rat", "fp")]


def _algebra(group, fld):
    return make_algebra(group, fld, 7 if fld == "fp" else None)


def _field_axioms(f, g, h, delta, one, zero):
    """Names of the identities violated by one random instance."""
    bad = []
    if (f + g) + h != f + (g + h) or f + g != g + f or f + zero != f or f + (-f) != zero:
        bad.append("additive group")
    if (f * g) * h != f * (g * h) or f * g != g * f or one * f != f:
        bad.append("multiplicative monoid")
    if f * (g + h) != f * g + f * h:
        bad.append("distributivity")
    vf, vg = f.valuation(), g.valuation()
    if (vf is INFINITY) != f.is_zero():
        bad.append("V0")
    if (f * g).valuation() != (INFINITY if f.is_zero() or g.is_zero() else vf + vg):
        bad.append("V1")
    if not (f + g).valuation() >= min(vf, vg):
        bad.append("V2")
    low = f.truncate(delta)
    high = f - low
    if low + high != f or low.truncate(delta) != low:
        bad.append("truncation resum/idempotence")
    if any(e >= delta for e in low.support) or any(e < delta for e in high.support):
        bad.append("truncation cut")
    p, c, eps = decompose(f)
    if p + constant(f.algebra, c) + eps != f:
        bad.append("decomposition resum")
    zero_g = f.algebra.group.zero
    if any(e >= zero_g for e in p.support) or any(e <= zero_g for e in eps.support):
        bad.append("decomposition signs")
    if not is_truncation_at_one(f, f.truncate(zero_g)) or not predicates(p).in_V:
        bad.append("truncation at one")
    m = monomial(f.algebra, delta)
    if truncate_at_monomial(f, m) != m * ((m ** -1) * f).truncate(zero_g) \
            or not is_truncation_at_monomial(f, m, f.truncate(delta)):
        bad.append("truncation at a monomial")
    return bad


def criterion_field_axioms(seed=DEFAULT_SEED, per_algebra=500):
    def run():
        failures, counts = [], {}
        for group, fld in ALGEBRAS:
            alg = _algebra(group, fld)
            rng = random.Random(f"{seed}/{group}/{fld}")
            one, zero = Series(alg, [(alg.group.zero, alg.field.one)]), Series(alg)
            for k in range(per_algebra):
                f, g, h = (random_series(alg, rng) for _ in range(3))
                delta = alg.group.random(rng)
                bad = _field_axioms(f, g, h, delta, one, zero)
                if bad and len(failures) < 5:
                    failures.append({"algebra": str(alg), "case": k, "failed": bad,
                                     "f": str(f), "g": str(g), "h": str(h)})
            counts[str(alg)] = per_algebra
        return not failures, {"instances": counts, "failures": failures}
    return _timed("C1", "Hahn-field axioms, truncation and decomposition", 10, run)


def criterion_arithmetic():
    def run():
        div_bad = [(m, n) for m in range(24) for n in range(24)
                   if mso_divides(m, n, 64) != ((n == 0) if m == 0 else n % m == 0)]
        mult_bad = []
        for m in range(7):
            for k in range(7):
                hits = [n for n in range(200) if mso_mult(m, k, n, 200)]
                if hits != [m * k]:
                    mult_bad.append({"m": m, "k": k, "hits": hits})
        agree_bad, cases = [], 0
        for B in range(1, 15):
            for m in range(B):
                for n in range(B):
                    cases += 1
                    a = {"m": m, "n": n}
                    if evaluate(DIVISIBILITY, B, a, "enum") != evaluate(DIVISIBILITY, B, a, "lfp"):
                        agree_bad.append((B, m, n))
        details = {"divisibility_cases": 576, "divisibility_mismatches": div_bad[:5],
                   "multiplication_pairs": 49, "multiplication_failures": mult_bad[:5],
                   "strategy_cases": cases, "strategy_mismatches": agree_bad[:5]}
        return not (div_bad or mult_bad or agree_bad), details
    return _timed("C2", "divisibility, multiplication and strategy agreement in bounded MSO", 60, run)


def criterion_interpretation(seed=DEFAULT_SEED):
    def run():
        alg = make_algebra("rat", "rat")
        t = monomial(alg, 1)
        big = check_interpretation(InterpretationConfig(t, 32), trials=200, seed=seed, exhaustive=False)
        small = check_interpretation(InterpretationConfig(t, 12), trials=200, seed=seed, exhaustive=True)
        failed = [dict(c, depth=r["depth"]) for r in (big, small) for c in r["checks"] if not c["pass"]]
        return big["pass"] and small["pass"], {"depth_32": big["checks"], "depth_12": small["checks"],
                                                 "failures": failed}
    return _timed("C3", "finite interpretation of (N, P(N); +, in) by powers of t", None, run)


def _bounded_series(alg, rng):
    """Random element of the valuation ring; constants about a third of the time."""
    if rng.random() < 0.3:
        return constant(alg, alg.field.random(rng, nonzero=False))
    f = random_series(alg, rng)
    return f - f.truncate(alg.group.zero)


def criterion_definability(seed=DEFAULT_SEED):
    def run():
        rng = random.Random(seed)
        alg = make_algebra("rat", "rat")
        r_bad = ts_bad = cf_bad = 0
        examples = []
        for _ in range(500):
            f = random_series(alg, rng)
            exps = list(f.support) + [alg.group.random(rng)]
            e = rng.choice(exps)
            a = monomial(alg, e) if rng.random() < 0.9 else monomial(alg, e, alg.field.random(rng))
            if rel_R(a, f) != rel_R_oracle(a, f):
                r_bad += 1
                examples.append({"relation": "R", "a": str(a), "f": str(f)})
            g = rng.choice(exps)
            if two_sorted_R(g, f) != (g in f.support):
                ts_bad += 1
                examples.append({"relation": "two-sorted R", "gamma": str(g), "f": str(f)})
        probes = [monomial(alg, -1), monomial(alg, alg.exponent("-1/2")), Series(alg)]
        false_verdicts = 0
        for _ in range(300):
            f = _bounded_series(alg, rng)
            res = coeff_field_test(f, probes)
            if res.verdict != predicates(f).in_k:
                cf_bad += 1
                examples.append({"relation": "coefficient field", "f": str(f)})
            if not res.verdict:
                false_verdicts += 1
                if res.witness is None or not predicates(res.witness).in_V \
                        or predicates(f * res.witness).in_V:
                    cf_bad += 1
                    examples.append({"relation": "witness", "f": str(f)})
        details = {"rel_R_mismatches": r_bad, "two_sorted_R_mismatches": ts_bad,
                   "coeff_field_failures": cf_bad, "false_verdicts_with_witness": false_verdicts,
                   "examples": examples[:5]}
        return not (r_bad or ts_bad or cf_bad), details
    return _timed("C4", "definable relations agree with support membership", None, run)


def criterion_sop():
    def run():
        thetas = list(range(10))
        universe = default_sop_universe(thetas)
        sets = sop_solution_sets(sop_chain(thetas), universe)
        pairs = list(itertools.combinations(range(10), 2))
        bad = [(m, n) for m, n in pairs if not sets[m] < sets[n]]
        return len(universe) == 20 and not bad, {
            "universe": len(universe), "pairs_checked": len(pairs),
            "sizes": [len(s) for s in sets], "failures": bad}
    return _timed("C5", "strict order chain of length 10", None, run)


def criterion_tp2(caps: TowerCaps = TowerCaps()):
    def run():
        report = verify_tp2(tp2_grid(2, 3, caps))
        claim1 = {str(a): verify_claim1(a, caps)
                  for n in (1, 2, 3) for a in itertools.product(range(3), repeat=n)}
        claim2 = {}
        for i in range(3):
            level_caps = caps if i < 2 else TowerCaps(caps.outer, 1, caps.max_bits)
            for j, k in itertools.combinations(range(3), 2):
                claim2[f"{i}:{j},{k}"] = verify_claim2(i, j, k, level_caps)
        ok = report["pass"] and all(claim1.values()) and all(claim2.values())
        return ok, {"grid": report, "claim1_cases": len(claim1),
                    "claim1_failures": [a for a, v in claim1.items() if not v],
                    "claim2_cases": len(claim2),
                    "claim2_failures": [a for a, v in claim2.items() if not v]}
    return _timed("C6", "2x3 prime-tower grid", 30, run)


def criterion_shattering():
    def run():
        inst = subset_sum_instance(range(10))
        universe = default_sop_universe(range(15))
        shatters = check_shatters(inst)
        only = check_shatters(inst, universe, only=True)
        opp = ip_opp_instance(inst, 3)
        opp_ok = check_shatters(opp) and len(opp.targets) == 3
        return shatters and only and opp_ok, {
            "parameters": len(inst.params), "targets": len(inst.targets), "shatters": shatters,
            "universe": len(universe), "only_shatters": only, "transposed_shatters": opp_ok}
    return _timed("C7", "subset sums shatter ten monomials", None, run)


def criterion_selftest(limit=180.0):
    """Run the command-line selftest in a fresh interpreter."""
    def run():
        proc = subprocess.run([sys.executable, "-m", "hahntrunc", "selftest"],
                              capture_output=True, text=True, timeout=limit + 30)
        return proc.returncode == 0, {"exit_code": proc.returncode,
                                      "output": proc.stdout.strip().splitlines()}
    return _timed("C8", "selftest exits 0 within the time limit", limit, run)


def run_suite(seed=DEFAULT_SEED, caps: TowerCaps = TowerCaps()):
    """Criteria C1 to C7; C8 is the selftest wrapping this call."""
    return [
        criterion_field_axioms(seed),
        criterion_arithmetic(),
        criterion_interpretation(seed),
        criterion_definability(seed),
        criterion_sop(),
        criterion_tp2(caps),
        criterion_shattering(),
    ]

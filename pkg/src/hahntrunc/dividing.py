"""Finite witnesses that ``rel_R`` has the strict order property, the tree
property of the second kind and the independence property.

Prime towers: ``p_i`` is the ``i``-th prime (``p_0 = 2``).  Level 0 of
column ``j`` holds the powers ``p_j**n`` (``n >= 1``); level ``i`` holds
``p_n**m`` for any prime index ``n >= 0`` and ``m`` from level ``i-1`` of the
same column.  A right-associated tower ``p_a0 ** p_a1 ** ...`` sits in level
``i`` of column ``a_i`` for every ``i``, while two columns of one level never
meet (unique factorization).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations, product

import sympy

from .algebra import Algebra, make_algebra
from .errors import OverflowGuardError, UsageError
from .interpretation import rel_R
from .series import Series, format_series, monomial

__all__ = [
    "sop_chain", "sop_solution_sets", "verify_sop", "default_sop_universe",
    "nth_prime", "TowerCaps", "prime_tower_fragment", "decode_tower", "tower_element",
    "verify_claim1", "verify_claim2", "covering_caps",
    "WitnessGrid", "tp2_grid", "verify_tp2",
    "ShatterInstance", "subset_sum_instance", "check_shatters", "ip_opp_instance",
    "MAX_DEPTH",
]

INT_ALGEBRA = make_algebra("int", "rat")

# fragments above this level have no useful finite caps
MAX_DEPTH = 2


# -- strict order property ---------------------------------------------------

def sop_chain(thetas, algebra: Algebra | None = None) -> list:
    """Partial sums ``t^th_0 + ... + t^th_n`` of a strictly increasing exponent list."""
    alg = algebra or make_algebra("rat", "rat")
    thetas = [alg.exponent(x) for x in thetas]
    if len(thetas) < 2:
        raise UsageError("a chain needs at least two exponents")
    for a, b in zip(thetas, thetas[1:]):
        if not a < b:
            raise UsageError(f"exponents must increase strictly: {alg.group.format(a)} "
                             f"is not below {alg.group.format(b)}")
    chain, partial = [], Series(alg)
    for th in thetas:
        partial = partial + monomial(alg, th)
        chain.append(partial)
    return chain


def sop_solution_sets(chain, universe) -> list:
    """Indices ``k`` with ``rel_R(universe[k], f)``, one frozenset per chain element."""
    return [frozenset(k for k, x in enumerate(universe) if rel_R(x, f)) for f in chain]


def verify_sop(chain, universe) -> bool:
    """Every earlier solution set is a proper subset of every later one."""
    sets = sop_solution_sets(chain, universe)
    return all(sets[m] < sets[n] for m, n in combinations(range(len(sets)), 2))


def default_sop_universe(thetas, algebra: Algebra | None = None) -> list:
    """The chain's monomials plus one off-chain monomial per gap and one above the top."""
    alg = algebra or make_algebra("rat", "rat")
    if alg.group.kind != "rat":
        raise UsageError("the default universe needs rational exponents")
    thetas = [alg.exponent(x) for x in thetas]
    extra = [(a + b) / 2 for a, b in zip(thetas, thetas[1:])]
    extra.append(2 * thetas[-1] - thetas[-2])
    return [monomial(alg, e) for e in thetas + extra]


# -- prime towers ------------------------------------------------------------

@lru_cache(maxsize=None)
def nth_prime(i: int) -> int:
    """``p_i`` with ``p_0 = 2``."""
    if i < 0:
        raise UsageError("prime index must be non-negative")
    return int(sympy.prime(i + 1))


@dataclass(frozen=True)
class TowerCaps:
    """Finite slice of the tower levels.

    ``outer``: largest outer prime index (indices ``0..outer``);
    ``exponent``: largest level-0 exponent (``1..exponent``);
    ``max_bits``: refuse any power whose bit length would exceed this.
    """

    outer: int = 2
    exponent: int = 3
    max_bits: int = 1 << 20

    def __post_init__(self):
        if self.outer < 0 or self.exponent < 1 or self.max_bits < 1:
            raise UsageError("caps need outer >= 0, exponent >= 1 and max_bits >= 1")

    def to_json(self):
        return {"outer": self.outer, "exponent": self.exponent, "max_bits": self.max_bits}


def _power(p: int, e: int, max_bits: int) -> int:
    if e * p.bit_length() > max_bits:
        raise OverflowGuardError(
            f"{p}^{e if e.bit_length() < 64 else f'<{e.bit_length()}-bit exponent>'} "
            f"would exceed the {max_bits}-bit guard")
    return p ** e


def prime_tower_fragment(i: int, j: int, caps: TowerCaps = TowerCaps()) -> frozenset:
    """Elements of level ``i``, column ``j`` whose construction indices respect ``caps``."""
    if not 0 <= i <= MAX_DEPTH:
        raise UsageError(f"level {i} is outside the supported range 0..{MAX_DEPTH}")
    if j < 0:
        raise UsageError("column index must be non-negative")
    return _fragment(i, j, caps)


@lru_cache(maxsize=512)
def _fragment(i, j, caps):
    if i == 0:
        p = nth_prime(j)
        return frozenset(_power(p, n, caps.max_bits) for n in range(1, caps.exponent + 1))
    inner = _fragment(i - 1, j, caps)
    return frozenset(_power(nth_prime(n), m, caps.max_bits)
                     for n in range(caps.outer + 1) for m in inner)


def _prime_power(x: int, max_index: int):
    """All ``(k, e)`` with ``x = p_k**e``, ``k <= max_index``, ``e >= 1``."""
    out = []
    for k in range(max_index + 1):
        p = nth_prime(k)
        e = sympy.multiplicity(p, x)
        if e and p ** e == x:
            out.append((k, e))
    return out


def decode_tower(x: int, level: int, max_index: int) -> list:
    """Every way to read ``x`` as a level-``level`` element with prime indices ``<= max_index``.

    Each reading is ``(outer prime indices, outermost first; column; level-0 exponent)``.
    """
    if level == 0:
        return [((), k, e) for k, e in _prime_power(x, max_index)]
    out = []
    for k, e in _prime_power(x, max_index):
        for outers, col, n in decode_tower(e, level - 1, max_index):
            out.append(((k,) + outers, col, n))
    return out


def tower_element(alpha, max_bits: int = 1 << 20) -> int:
    """``p_a0 ** (p_a1 ** (... ** p_a(n-1)))``; 1 for the empty tower."""
    value = 1
    for a in reversed(list(alpha)):
        value = _power(nth_prime(a), value, max_bits)
    return value


def _tail(alpha, start, max_bits):
    return tower_element(alpha[start:], max_bits)


def verify_claim1(alpha, caps: TowerCaps = TowerCaps()) -> bool:
    """The tower of ``alpha`` lies in level ``i``, column ``alpha[i]`` for every ``i``.

    Each fragment is regenerated with the smallest caps that can contain the
    tower (only ``caps.max_bits`` is taken from ``caps``), and the expected
    construction indices are cross-checked by factorization.
    """
    alpha = tuple(alpha)
    x = tower_element(alpha, caps.max_bits)
    for i, a in enumerate(alpha):
        need = replace(caps, outer=max(alpha[:i], default=0),
                       exponent=_tail(alpha, i + 1, caps.max_bits))
        reading = (alpha[:i], a, need.exponent)
        if x not in prime_tower_fragment(i, a, need) or reading not in decode_tower(x, i, max(alpha)):
            return False
    return True


def verify_claim2(i: int, j: int, k: int, caps: TowerCaps = TowerCaps()) -> bool:
    """Columns ``j`` and ``k`` of level ``i`` are disjoint.

    Checked twice: by comparing every pair of elements, and by decoding every
    element and confirming its column is the one it was generated in.
    """
    if j == k:
        raise UsageError("columns must differ")
    A, B = prime_tower_fragment(i, j, caps), prime_tower_fragment(i, k, caps)
    if any(a == b for a, b in product(A, B)):
        return False
    top = max(caps.outer, j, k)
    for col, frag in ((j, A), (k, B)):
        for x in frag:
            readings = decode_tower(x, i, top)
            if len(readings) != 1 or readings[0][1] != col:
                return False
    return True


def covering_caps(depth: int, width: int, floor: TowerCaps = TowerCaps()) -> list:
    """Per-row caps large enough that every path's tower lies in its fragments."""
    caps = []
    top = [width - 1] * depth
    for i in range(depth):
        exponent = tower_element(top[i + 1:], floor.max_bits)
        outer = width - 1 if i else 0
        caps.append(replace(floor, outer=max(floor.outer, outer), exponent=max(floor.exponent, exponent)))
    return caps


@dataclass(frozen=True)
class WitnessGrid:
    """Fragments ``A[i][j]`` and parameters ``b[i][j] = sum of t^a over A[i][j]``."""

    depth: int
    width: int
    caps: tuple
    fragments: tuple
    params: tuple = field(repr=False)

    def to_json(self):
        return {
            "depth": self.depth, "width": self.width,
            "caps": [c.to_json() for c in self.caps],
            "fragment_sizes": [[len(A) for A in row] for row in self.fragments],
        }


def _param(fragment, alg):
    one = alg.field.one
    return Series._canonical(alg, [(a, one) for a in sorted(fragment)])


def tp2_grid(depth: int, width: int, caps: TowerCaps = TowerCaps()) -> WitnessGrid:
    """The ``depth x width`` grid of tower fragments over the integer value group."""
    if depth < 0 or width < 0:
        raise UsageError("depth and width must be non-negative")
    if depth > MAX_DEPTH + 1:
        raise UsageError(f"depth {depth} exceeds the supported {MAX_DEPTH + 1}")
    row_caps = covering_caps(depth, width, caps) if width else [caps] * depth
    frags = tuple(tuple(prime_tower_fragment(i, j, row_caps[i]) for j in range(width))
                  for i in range(depth))
    params = tuple(tuple(_param(A, INT_ALGEBRA) for A in row) for row in frags)
    return WitnessGrid(depth, width, tuple(row_caps), frags, params)


def verify_tp2(grid: WitnessGrid, paths=None) -> dict:
    """Path consistency through explicit towers, and pairwise row inconsistency.

    A path ``s`` is realized by ``x = t^tower(s)``, which must satisfy
    ``rel_R(x, b[i][s[i]])`` on every row.  For row inconsistency the
    universe is every monomial ``t^a`` with ``a`` in some fragment of the row
    or a path tower; no ``x`` there may satisfy two columns of one row.
    """
    d, w = grid.depth, grid.width
    if paths is None:
        paths = list(product(range(w), repeat=d)) if d else []
    checks = []
    bad, towers = None, []
    for s in paths:
        s = tuple(s)
        if len(s) != d or any(not 0 <= c < w for c in s):
            raise UsageError(f"path {s} does not map {d} rows into {w} columns")
        tower = tower_element(s, max(c.max_bits for c in grid.caps))
        towers.append(tower)
        x = monomial(INT_ALGEBRA, tower)
        if not all(rel_R(x, grid.params[i][c]) for i, c in enumerate(s)):
            bad = bad or {"path": list(s)}
    checks.append({"name": "paths consistent", "pass": bad is None, "cases": len(paths),
                   **({"counterexample": bad} if bad else {})})

    bad, pairs = None, 0
    for i in range(d):
        exps = set(towers).union(*grid.fragments[i])
        universe = [monomial(INT_ALGEBRA, a) for a in sorted(exps)]
        sat = [frozenset(k for k, x in enumerate(universe) if rel_R(x, b)) for b in grid.params[i]]
        for j, k in combinations(range(w), 2):
            pairs += 1
            common = sat[j] & sat[k]
            if common:
                bad = bad or {"row": i, "columns": [j, k],
                              "witness": str(universe[min(common)].terms[0][0])}
    checks.append({"name": "row pairs inconsistent", "pass": bad is None, "cases": pairs,
                   **({"counterexample": bad} if bad else {})})

    bad, audited = None, 0
    for i in range(d):
        top = max(grid.caps[i].outer, w - 1)
        for j in range(w):
            for other in range(j + 1, w):
                if any(a == b for a in grid.fragments[i][j] for b in grid.fragments[i][other]):
                    bad = bad or {"row": i, "columns": [j, other], "reason": "shared element"}
            for x in grid.fragments[i][j]:
                audited += 1
                readings = decode_tower(x, i, top)
                if len(readings) != 1 or readings[0][1] != j:
                    bad = bad or {"row": i, "column": j, "reason": "factorization",
                                  "readings": len(readings)}
    checks.append({"name": "fragments disjoint (intersection and factorization)",
                   "pass": bad is None, "cases": audited,
                   **({"counterexample": bad} if bad else {})})
    return {"grid": grid.to_json(), "pass": all(c["pass"] for c in checks), "checks": checks}


# -- shattering --------------------------------------------------------------

RELATIONS = {
    "R": lambda x, y: rel_R(x, y),
    "R_opp": lambda x, y: rel_R(y, x),
}


@dataclass(frozen=True)
class ShatterInstance:
    """Targets ``A`` and one parameter per index subset of ``A``.

    ``params`` maps frozensets of target indices to series; ``relation``
    names the formula: ``"R"`` reads ``rel_R(a, b)``, ``"R_opp"`` reads
    ``rel_R(b, a)``.
    """

    targets: tuple
    params: dict = field(hash=False)
    relation: str = "R"

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise UsageError(f"unknown relation {self.relation!r}")

    def holds(self, a, b) -> bool:
        return RELATIONS[self.relation](a, b)


def subset_sum_instance(thetas, algebra: Algebra | None = None) -> ShatterInstance:
    """Targets ``t^th`` and, per subset, the sum of its monomials."""
    alg = algebra or make_algebra("rat", "rat")
    targets = tuple(monomial(alg, alg.exponent(th)) for th in thetas)
    params = {}
    zero = Series(alg)
    for mask in range(1 << len(targets)):
        S = frozenset(k for k in range(len(targets)) if mask >> k & 1)
        params[S] = sum((targets[k] for k in S), zero)
    return ShatterInstance(targets, params)


def check_shatters(inst: ShatterInstance, universe=(), only: bool = False) -> bool:
    """Every index subset ``S`` is cut out exactly by its parameter.

    A missing parameter means the family does not shatter, so the answer is
    False.  With ``only``, elements of ``universe`` outside the targets must
    satisfy no parameter at all.
    """
    n = len(inst.targets)
    outside = [x for x in universe if x not in inst.targets] if only else []
    for mask in range(1 << n):
        S = frozenset(k for k in range(n) if mask >> k & 1)
        b = inst.params.get(S)
        if b is None:
            return False
        for k, a in enumerate(inst.targets):
            if inst.holds(a, b) != (k in S):
                return False
        if any(inst.holds(x, b) for x in outside):
            return False
    return True


def ip_opp_instance(inst: ShatterInstance, rows: int) -> ShatterInstance:
    """Swap points and parameters on ``rows`` coordinates.

    Target ``k < 2**rows`` of ``inst`` stands for the subset ``J`` of
    ``range(rows)`` with bitmask ``k``.  The new targets are the parameters
    of the principal filters ``{J : i in J}``; the parameter for a subset
    ``J`` of the new targets is the old point of ``J``.
    """
    if rows < 0:
        raise UsageError("rows must be non-negative")
    if len(inst.targets) < 1 << rows:
        raise UsageError(f"{rows} rows need {1 << rows} targets, the instance has {len(inst.targets)}")
    targets = []
    for i in range(rows):
        filt = frozenset(k for k in range(1 << rows) if k >> i & 1)
        if filt not in inst.params:
            raise UsageError(f"no parameter for the filter of coordinate {i}")
        targets.append(inst.params[filt])
    params = {}
    for k in range(1 << rows):
        J = frozenset(i for i in range(rows) if k >> i & 1)
        params[J] = inst.targets[k]
    relation = "R_opp" if inst.relation == "R" else "R"
    return ShatterInstance(tuple(targets), params, relation)


def describe_instance(inst: ShatterInstance) -> dict:
    return {
        "relation": inst.relation,
        "targets": [format_series(a) for a in inst.targets],
        "parameters": len(inst.params),
    }

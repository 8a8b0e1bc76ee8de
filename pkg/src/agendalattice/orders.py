"""Decision procedures for orderings between mass functions.

* ``leq_pl`` / ``leq_q``: pointwise comparison of plausibility / commonality.
* ``leq_up``: upward restricted order, compared on every up-closed family of sets.
* ``leq_s``: specialization, decided as a transportation (max-flow) problem.
* ``leq_d``: Dempsterian specialization, decided as an exact LP.

Every failing or succeeding verdict carries a witness that
:func:`revalidate` can check again by direct arithmetic.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Real
from typing import Any

from . import bits
from .flow import FlowNetwork
from .fca import EnumerationGuardError
from .lp import find_feasible
from .mass import TOL, MassFunction, pl, q

FULL_SCAN_MAX = 20
CLOSURE_SCAN_MAX = 1 << 16
DEMPSTER_MAX_UNIVERSE = 12
UPSET_ENUMERATION_MAX = 1 << 16

RELATIONS = ("pl", "q", "up", "s", "d")


class OrderError(ValueError):
    pass


@dataclass(frozen=True)
class OrderVerdict:
    relation: str
    holds: bool
    witness: dict[str, Any] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _tol(m1: MassFunction, m2: MassFunction) -> Real:
    return 0 if m1.exact and m2.exact else TOL


def _same_universe(m1: MassFunction, m2: MassFunction) -> None:
    if m1.universe != m2.universe:
        raise OrderError("mass functions live on different universes")


def _all_subsets_by_size(n: int) -> Iterable[int]:
    for k in range(n + 1):
        for combo in combinations(range(n), k):
            yield bits.from_indices(combo)


def _closure(sets: Iterable[int], op) -> set[int]:
    closed = set(sets)
    frontier = list(closed)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in closed:
                c = op(a, b)
                if c not in closed:
                    fresh.add(c)
        closed |= fresh
        if len(closed) > CLOSURE_SCAN_MAX:
            raise EnumerationGuardError("focal-set closure too large to scan")
        frontier = list(fresh)
    return closed


def _pointwise(relation: str, fn, m1: MassFunction, m2: MassFunction, candidates: Iterable[int]) -> OrderVerdict:
    tol = _tol(m1, m2)
    for y in candidates:
        v1, v2 = fn(m1, y), fn(m2, y)
        if v1 > v2 + tol:
            return OrderVerdict(relation, False, {"set": m1.names(y), "lhs": v1, "rhs": v2})
    return OrderVerdict(relation, True)


def leq_pl(m1: MassFunction, m2: MassFunction) -> OrderVerdict:
    """pl_m1(Y) <= pl_m2(Y) for every Y; the witness is a smallest violating Y."""
    _same_universe(m1, m2)
    n = len(m1.universe)
    if n <= FULL_SCAN_MAX:
        candidates = _all_subsets_by_size(n)
    else:
        # pl(Y) = total - bel(complement); bel only changes at unions of focal sets
        unions = _closure(set(m1.focal) | set(m2.focal) | {0}, lambda a, b: a | b)
        full = m1.full
        candidates = sorted((full & ~z for z in unions), key=bits.sort_key)
    return _pointwise("pl", pl, m1, m2, candidates)


def leq_q(m1: MassFunction, m2: MassFunction) -> OrderVerdict:
    """q_m1(Y) <= q_m2(Y) for every Y; the witness is a smallest violating Y."""
    _same_universe(m1, m2)
    n = len(m1.universe)
    if n <= FULL_SCAN_MAX:
        candidates = _all_subsets_by_size(n)
    else:
        # q(Y) = q(intersection of the focal sets containing Y)
        meets = _closure(set(m1.focal) | set(m2.focal), lambda a, b: a & b) | {0}
        candidates = sorted(meets, key=bits.sort_key)
    return _pointwise("q", q, m1, m2, candidates)


def upset_in_powerset(generators: Iterable[int], n: int) -> list[int]:
    """Every subset of an ``n``-element universe containing some generator."""
    if n > FULL_SCAN_MAX:
        raise EnumerationGuardError("up-set too large to materialize")
    gens = list(generators)
    return sorted(
        (y for y in range(1 << n) if any(bits.is_subset(g, y) for g in gens)),
        key=bits.sort_key,
    )


def minimal_elements(family: Iterable[int]) -> list[int]:
    fam = set(family)
    return sorted(
        (a for a in fam if not any(b != a and bits.is_subset(b, a) for b in fam)),
        key=bits.sort_key,
    )


def upclosed_subsets(poset: Iterable[int]) -> list[frozenset[int]]:
    """All subfamilies of ``poset`` closed upward under inclusion within ``poset``.

    Exhaustive reference enumeration; the count is bounded by a guard.
    """
    elems = sorted(set(poset), key=lambda a: -bits.popcount(a))
    supersets = {a: [b for b in elems if b != a and bits.is_subset(a, b)] for a in elems}
    out: list[frozenset[int]] = []

    def extend(i: int, chosen: frozenset[int]) -> None:
        if len(out) > UPSET_ENUMERATION_MAX:
            raise EnumerationGuardError("too many up-closed families to enumerate")
        if i == len(elems):
            out.append(chosen)
            return
        a = elems[i]
        extend(i + 1, chosen)
        # larger sets come first, so every superset of a is already decided
        if all(b in chosen for b in supersets[a]):
            extend(i + 1, chosen | {a})

    extend(0, frozenset())
    return out


def max_violation_upset(m1: MassFunction, m2: MassFunction) -> tuple[Real, frozenset[int]]:
    """Up-closed family U of focal sets maximising m1(U) - m2(U).

    Maximum-weight closure via a minimum cut; among optimal families the
    smallest one (the residual source side) is returned.
    """
    _same_universe(m1, m2)
    focal = sorted(set(m1.focal) | set(m2.focal), key=bits.sort_key)
    weight = {f: m1[f] - m2[f] for f in focal}
    net = FlowNetwork()
    net.add_node("s")
    net.add_node("t")
    positive = 0
    for f in focal:
        w = weight[f]
        if w > 0:
            net.add_edge("s", f, w)
            positive += w
        elif w < 0:
            net.add_edge(f, "t", -w)
        else:
            net.add_node(f)
        for g in focal:
            if g != f and bits.is_subset(f, g):
                net.add_edge(f, g, None)
    cut = net.max_flow("s", "t")
    side = frozenset(v for v in net.reachable("s") if v != "s")
    return positive - cut, side


def leq_up(m1: MassFunction, m2: MassFunction) -> OrderVerdict:
    """m1(V) <= m2(V) for every up-closed family V of subsets.

    Only the trace of V on the combined focal sets matters, and each up-closed
    trace is realized by the up-set it generates, so the search runs over the
    finite poset of focal sets.
    """
    gap, family = max_violation_upset(m1, m2)
    if gap <= _tol(m1, m2):
        return OrderVerdict("up", True)
    upset = sorted(family, key=bits.sort_key)
    return OrderVerdict(
        "up",
        False,
        {
            "upset": [m1.names(y) for y in upset],
            "generators": [m1.names(y) for y in minimal_elements(upset)],
            "lhs": sum(m1[y] for y in upset),
            "rhs": sum(m2[y] for y in upset),
        },
    )


def leq_s(m1: MassFunction, m2: MassFunction) -> OrderVerdict:
    """Is m1 obtained by moving each focal mass of m2 onto subsets of that focal set?"""
    _same_universe(m1, m2)
    net = FlowNetwork()
    net.add_node("s")
    net.add_node("t")
    for y, wy in m2.focal.items():
        net.add_edge("s", ("Y", y), wy)
        for w in m1.focal:
            if bits.is_subset(w, y):
                net.add_edge(("Y", y), ("W", w), None)
    for w, ww in m1.focal.items():
        net.add_edge(("W", w), "t", ww)
    value = net.max_flow("s", "t")
    if value < 1 - _tol(m1, m2):
        return OrderVerdict("s", False, {"max_flow": value})
    matrix = []
    for y, wy in m2.focal.items():
        for node, f in net.flow[("Y", y)].items():
            if node != "s" and f > 0:
                matrix.append({"W": m1.names(node[1]), "Y": m1.names(y), "S": f / wy})
    return OrderVerdict("s", True, {"matrix": matrix})


def _conjunctive_pair(m: MassFunction, m2: MassFunction) -> dict[int, Real]:
    out: dict[int, Real] = {}
    for a, wa in m.focal.items():
        for b, wb in m2.focal.items():
            out[a & b] = out.get(a & b, 0) + wa * wb
    return out


def leq_d(m1: MassFunction, m2: MassFunction) -> OrderVerdict:
    """Is m1 the unnormalized conjunctive combination of m2 with some mass m?

    Columns Z whose intersection with some focal set of m2 misses the focal
    sets of m1 must carry zero mass and are dropped; Z only matters through
    its intersections with m2's focal sets, so equivalent columns are merged.
    """
    _same_universe(m1, m2)
    n = len(m1.universe)
    if n > DEMPSTER_MAX_UNIVERSE:
        raise EnumerationGuardError(f"Dempsterian order needs at most {DEMPSTER_MAX_UNIVERSE} features")
    f1 = list(m1.focal)
    f1_set = set(f1)
    f2 = list(m2.focal.items())
    support = 0
    for y, _ in f2:
        support |= y
    columns: dict[tuple[int, ...], int] = {}
    for z in _all_subsets_by_size(bits.popcount(support)):
        # spread the compact index over the support bits
        zz = 0
        for k, pos in enumerate(bits.indices(support)):
            if z >> k & 1:
                zz |= 1 << pos
        signature = tuple(zz & y for y, _ in f2)
        if signature in columns or not all(w in f1_set for w in signature):
            continue
        columns[signature] = zz
    if not columns:
        return OrderVerdict("d", False, {"reason": "no admissible combining set"})
    reps = list(columns.values())
    row_of = {w: i for i, w in enumerate(f1)}
    A = [[Fraction(0)] * len(reps) for _ in f1]
    for j, z in enumerate(reps):
        for y, wy in f2:
            A[row_of[z & y]][j] += Fraction(wy)
    b = [Fraction(m1.focal[w]) for w in f1]
    exact = m1.exact and m2.exact
    x = find_feasible(A, b, Fraction(0) if exact else Fraction(TOL))
    if x is None:
        return OrderVerdict("d", False, {"reason": "linear system infeasible"})
    weights = {z: (v if exact else float(v)) for z, v in zip(reps, x) if v > 0}
    total = sum(weights.values())
    if not exact:
        weights = {z: v / total for z, v in weights.items()}
    witness = MassFunction(m1.universe, weights)
    return OrderVerdict("d", True, {"mass": witness})


DECIDERS = {"pl": leq_pl, "q": leq_q, "up": leq_up, "s": leq_s, "d": leq_d}


def decide(relation: str, m1: MassFunction, m2: MassFunction) -> OrderVerdict:
    try:
        fn = DECIDERS[relation]
    except KeyError:
        raise OrderError(f"unknown relation {relation!r}") from None
    return fn(m1, m2)


def check_specialization_matrix(matrix: list[dict], m1: MassFunction, m2: MassFunction, tol: float = TOL) -> bool:
    """Column sums 1 on m2's focal sets, support only on W <= Y, and m1 = S m2."""
    cols: dict[int, Real] = {}
    produced: dict[int, Real] = {}
    for entry in matrix:
        w = m1.as_bits(entry["W"])
        y = m1.as_bits(entry["Y"])
        s = entry["S"]
        if s < 0 or (s > 0 and not bits.is_subset(w, y)):
            return False
        cols[y] = cols.get(y, 0) + s
        produced[w] = produced.get(w, 0) + s * m2[y]
    if any(abs(cols.get(y, 0) - 1) > tol for y in m2.focal):
        return False
    keys = set(produced) | set(m1.focal)
    return all(abs(produced.get(k, 0) - m1[k]) <= tol for k in keys)


def revalidate(verdict: OrderVerdict, m1: MassFunction, m2: MassFunction) -> bool:
    """Re-check a verdict's witness by direct arithmetic."""
    tol = _tol(m1, m2)
    w = verdict.witness
    if verdict.relation in ("pl", "q") and not verdict.holds:
        fn = pl if verdict.relation == "pl" else q
        y = m1.as_bits(w["set"])
        return fn(m1, y) > fn(m2, y) + tol
    if verdict.relation == "up" and not verdict.holds:
        upset = [m1.as_bits(y) for y in w["upset"]]
        focal = set(m1.focal) | set(m2.focal)
        closed = all(g in upset for f in upset for g in focal if bits.is_subset(f, g))
        return closed and sum(m1[y] for y in upset) > sum(m2[y] for y in upset) + tol
    if verdict.relation == "s" and verdict.holds:
        return check_specialization_matrix(w["matrix"], m1, m2, max(tol, 0))
    if verdict.relation == "d" and verdict.holds:
        combined = _conjunctive_pair(w["mass"], m2)
        keys = set(combined) | set(m1.focal)
        return all(abs(combined.get(k, 0) - m1[k]) <= tol for k in keys)
    return True


@dataclass(frozen=True)
class ChainReport:
    verdicts: dict[str, OrderVerdict]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


IMPLICATIONS = (("d", "s"), ("s", "up"), ("up", "pl"), ("up", "q"))


def implication_chain_check(m1: MassFunction, m2: MassFunction) -> ChainReport:
    """Evaluate all five relations and list any broken implication d=>s=>up=>(pl, q)."""
    verdicts = {r: DECIDERS[r](m1, m2) for r in RELATIONS}
    violations = [
        f"{a} holds but {b} fails" for a, b in IMPLICATIONS if verdicts[a].holds and not verdicts[b].holds
    ]
    return ChainReport(verdicts, violations)

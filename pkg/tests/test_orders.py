import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from scipy.optimize import linprog

from agendalattice import bits, orders
from agendalattice.agendas import combine_unnormalized
from agendalattice.fca import EnumerationGuardError
from agendalattice.flow import FlowNetwork
from agendalattice.lp import find_feasible
from agendalattice.mass import MassFunction, pl, q
from agendalattice.orders import (
    OrderError,
    decide,
    implication_chain_check,
    leq_d,
    leq_pl,
    leq_q,
    leq_s,
    leq_up,
    max_violation_upset,
    minimal_elements,
    revalidate,
    upclosed_subsets,
    upset_in_powerset,
)
from agendalattice.toy import ordering_masses

from helpers import random_mass, universe

F = Fraction
SEEDS = range(120)


def pair(rng, related=None):
    n = rng.randint(1, 4)
    m2 = random_mass(rng, n)
    if related is None:
        related = rng.random() < 0.5
    m1 = combine_unnormalized([random_mass(rng, n, max_focal=3), m2]) if related else random_mass(rng, n)
    return m1, m2


# --- infrastructure cross-checks -------------------------------------------------


def test_max_flow_matches_networkx():
    rng = random.Random(30)
    for _ in SEEDS:
        n = rng.randint(2, 8)
        net = FlowNetwork()
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        net.add_node(0)
        net.add_node(n - 1)
        for _ in range(rng.randint(1, 3 * n)):
            u, v = rng.sample(range(n), 2)
            c = rng.randint(1, 9)
            net.add_edge(u, v, c)
            if g.has_edge(u, v):
                g[u][v]["capacity"] += c
            else:
                g.add_edge(u, v, capacity=c)
        assert net.max_flow(0, n - 1) == nx.maximum_flow_value(g, 0, n - 1)


def test_uncapacitated_edge_stays_uncapacitated():
    net = FlowNetwork()
    net.add_edge("s", "a", 5)
    net.add_edge("a", "t", None)
    net.add_edge("a", "t", 1)
    assert net.max_flow("s", "t") == 5


def test_lp_feasibility_matches_scipy():
    rng = random.Random(31)
    agree = 0
    for _ in SEEDS:
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        A = [[F(rng.randint(-2, 3)) for _ in range(n)] for _ in range(m)]
        b = [F(rng.randint(-3, 5)) for _ in range(m)]
        x = find_feasible(A, b)
        res = linprog(np.zeros(n), A_eq=np.array(A, float), b_eq=np.array(b, float), bounds=[(0, None)] * n, method="highs")
        assert (x is not None) == (res.status == 0)
        if x is not None:
            assert all(v >= 0 for v in x)
            assert all(sum(a * v for a, v in zip(row, x)) == bi for row, bi in zip(A, b))
            agree += 1
    assert agree > 10


# --- pointwise orders ---------------------------------------------------------------


def scan(fn, m1, m2):
    return all(fn(m1, y) <= fn(m2, y) for y in range(1 << len(m1.universe)))


@pytest.mark.parametrize("decider,fn", [(leq_pl, pl), (leq_q, q)])
def test_pointwise_orders_match_scan(decider, fn):
    rng = random.Random(32)
    for _ in SEEDS:
        m1, m2 = pair(rng)
        verdict = decider(m1, m2)
        assert verdict.holds == scan(fn, m1, m2)
        assert revalidate(verdict, m1, m2)
        if not verdict.holds:
            y = m1.as_bits(verdict.witness["set"])
            smaller = [z for z in range(1 << len(m1.universe)) if bits.sort_key(z) < bits.sort_key(y)]
            assert all(fn(m1, z) <= fn(m2, z) for z in smaller)


@pytest.mark.parametrize("decider", [leq_pl, leq_q])
def test_closure_scan_agrees_with_full_scan(monkeypatch, decider):
    rng = random.Random(33)
    cases = [pair(rng) for _ in range(100)]
    full = [decider(a, b).holds for a, b in cases]
    monkeypatch.setattr(orders, "FULL_SCAN_MAX", 0)
    assert [decider(a, b).holds for a, b in cases] == full


def test_different_universes_rejected():
    with pytest.raises(OrderError):
        leq_pl(MassFunction(universe(1), {1: F(1)}), MassFunction(universe(2), {1: F(1)}))
    with pytest.raises(OrderError):
        decide("zz", MassFunction(universe(1), {1: F(1)}), MassFunction(universe(1), {1: F(1)}))


# --- upward order -------------------------------------------------------------------


def up_oracle(m1, m2):
    focal = set(m1.focal) | set(m2.focal)
    best = max(sum(m1[y] - m2[y] for y in fam) for fam in upclosed_subsets(focal))
    return best


def test_upward_order_matches_enumeration():
    rng = random.Random(34)
    for _ in SEEDS:
        m1, m2 = pair(rng)
        gap, family = max_violation_upset(m1, m2)
        assert gap == up_oracle(m1, m2)
        verdict = leq_up(m1, m2)
        assert verdict.holds == (gap <= 0)
        assert revalidate(verdict, m1, m2)


def test_upward_order_on_whole_powerset():
    # every up-closed family of the powerset, not just traces on focal sets
    rng = random.Random(35)
    for _ in range(40):
        n = rng.randint(1, 3)
        m1, m2 = random_mass(rng, n), random_mass(rng, n)
        families = upclosed_subsets(range(1 << n))
        holds = all(sum(m1[y] for y in fam) <= sum(m2[y] for y in fam) for fam in families)
        assert leq_up(m1, m2).holds == holds


def test_upclosed_subsets_counts():
    # up-sets of a 2-element chain and of the boolean lattice on 2 atoms
    assert len(upclosed_subsets([0b1, 0b11])) == 3
    assert len(upclosed_subsets(range(4))) == 6


def test_upset_helpers():
    assert upset_in_powerset([0b011], 3) == [0b011, 0b111]
    assert minimal_elements([0b011, 0b111, 0b100]) == [0b100, 0b011]
    with pytest.raises(EnumerationGuardError):
        upset_in_powerset([1], 21)


# --- specialization orders ------------------------------------------------------------


def specialization_lp_oracle(m1, m2):
    f1, f2 = list(m1.focal), list(m2.focal)
    cells = [(w, y) for w in f1 for y in f2 if bits.is_subset(w, y)]
    if not cells:
        return False
    A, b = [], []
    for w in f1:
        A.append([float(m2[y]) if (w2 == w) else 0.0 for w2, y in cells])
        b.append(float(m1[w]))
    for y in f2:
        A.append([1.0 if y2 == y else 0.0 for _, y2 in cells])
        b.append(1.0)
    res = linprog(np.zeros(len(cells)), A_eq=np.array(A), b_eq=np.array(b), bounds=[(0, None)] * len(cells), method="highs")
    return res.status == 0


def test_specialization_matches_lp():
    rng = random.Random(36)
    for _ in SEEDS:
        m1, m2 = pair(rng)
        verdict = leq_s(m1, m2)
        assert verdict.holds == specialization_lp_oracle(m1, m2)
        assert revalidate(verdict, m1, m2)


def dempster_lp_oracle(m1, m2):
    """All 2^n combining sets as columns, no pruning, floating point."""
    n = len(m1.universe)
    size = 1 << n
    A = np.zeros((size, size))
    for z in range(size):
        for y, wy in m2.focal.items():
            A[z & y, z] += float(wy)
    b = np.array([float(m1[x]) for x in range(size)])
    res = linprog(np.zeros(size), A_eq=A, b_eq=b, bounds=[(0, None)] * size, method="highs")
    return res.status == 0


def test_dempsterian_order_matches_full_lp():
    rng = random.Random(37)
    positives = 0
    for _ in SEEDS:
        m1, m2 = pair(rng)
        verdict = leq_d(m1, m2)
        assert verdict.holds == dempster_lp_oracle(m1, m2)
        assert revalidate(verdict, m1, m2)
        positives += verdict.holds
    assert positives >= 30


def test_dempsterian_witness_is_exact():
    rng = random.Random(38)
    n = 3
    m2 = random_mass(rng, n)
    m = random_mass(rng, n)
    m1 = combine_unnormalized([m, m2])
    verdict = leq_d(m1, m2)
    assert verdict.holds
    assert combine_unnormalized([verdict.witness["mass"], m2]) == m1


def test_dempsterian_guard():
    big = MassFunction(universe(13), {1: F(1)})
    with pytest.raises(EnumerationGuardError):
        leq_d(big, big)


def test_float_masses_use_tolerance():
    rng = random.Random(39)
    for _ in range(30):
        m1, m2 = pair(rng, related=True)
        f1 = MassFunction(m1.universe, {k: float(v) for k, v in m1.focal.items()})
        f2 = MassFunction(m2.universe, {k: float(v) for k, v in m2.focal.items()})
        for r in orders.RELATIONS:
            assert decide(r, f1, f2).holds == decide(r, m1, m2).holds


# --- chain and toy verdicts --------------------------------------------------------------


def test_chain_on_random_pairs():
    rng = random.Random(40)
    for _ in SEEDS:
        m1, m2 = pair(rng)
        report = implication_chain_check(m1, m2)
        assert report.ok, report.violations


def test_toy_verdict_witnesses():
    ms = ordering_masses()
    v = leq_q(ms["m2"], ms["m1"])
    assert not v.holds and v.witness["set"] == ["y1"]
    v = leq_pl(ms["m3"], ms["m4"])
    assert not v.holds and v.witness["set"] == ["y3"]

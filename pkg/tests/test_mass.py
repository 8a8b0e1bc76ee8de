import random
from fractions import Fraction
from itertools import combinations

import pytest

from agendalattice import bits
from agendalattice.mass import (
    ImportanceVector,
    MassError,
    MassFunction,
    NotABeliefFunction,
    bel,
    belief_table,
    categorical,
    contract_to_base,
    expand_to_scaled,
    from_importances,
    mass_from_bel,
    pignistic,
    pl,
    plausibility_transform,
    q,
    simple_mass,
    upset_probability,
    vacuous,
)

from helpers import random_mass, universe

F = Fraction
SEEDS = range(120)


def subsets(n):
    return range(1 << n)


def inclusion_exclusion(table, n):
    """m(A) = sum over B <= A of (-1)^|A - B| bel(B), summed literally."""
    out = {}
    for a in subsets(n):
        members = list(bits.indices(a))
        total = F(0)
        for k in range(len(members) + 1):
            for drop in combinations(members, k):
                total += (-1) ** k * table[a & ~bits.from_indices(drop)]
        if total:
            out[a] = total
    return out


def test_validation():
    U = universe(2)
    with pytest.raises(MassError):
        MassFunction(U, {1: F(1, 2)})
    with pytest.raises(MassError):
        MassFunction(U, {1: F(3, 2), 2: F(-1, 2)})
    with pytest.raises(MassError):
        MassFunction(U, {4: F(1)})
    with pytest.raises(MassError):
        MassFunction(("a", "a"), {1: F(1)})
    assert MassFunction(U, {1: 0.5, 2: 0.5 + 1e-12}).exact is False


def test_constructors():
    U = universe(3)
    assert vacuous(U).focal == {0b111: 1}
    assert categorical(U, ["y2"]).focal == {0b10: 1}
    m = simple_mass(U, ["y1"], F(1, 4))
    assert m[["y1"]] == F(1, 4) and m[0b111] == F(3, 4)
    with pytest.raises(MassError):
        simple_mass(U, U, F(1, 2))


def test_dict_roundtrip_reads_fraction_strings():
    m = MassFunction.from_dict({"universe": ["a", "b"], "focal": [{"set": ["a"], "mass": "3/10"}, {"set": ["a", "b"], "mass": "7/10"}]})
    assert m.exact and m[["a"]] == F(3, 10)
    assert MassFunction.from_dict(m.to_dict()) == m
    with pytest.raises(MassError):
        MassFunction.from_dict({"universe": ["a"]})


def test_moebius_roundtrip():
    rng = random.Random(1)
    for _ in SEEDS:
        n = rng.randint(1, 5)
        m = random_mass(rng, n, max_focal=6, allow_empty=True)
        table = belief_table(m)
        for y in subsets(n):
            assert table[y] == bel(m, y)
        assert mass_from_bel(m.universe, table) == m
        assert inclusion_exclusion(table, n) == dict(m.focal)


def test_moebius_rejects_non_belief_tables():
    with pytest.raises(NotABeliefFunction):
        mass_from_bel(universe(1), [F(1, 2), F(1, 4)])


def test_bel_pl_q_relations():
    rng = random.Random(2)
    for _ in SEEDS:
        n = rng.randint(1, 5)
        m = random_mass(rng, n, max_focal=6)
        full = m.full
        for y in subsets(n):
            assert bel(m, y) <= pl(m, y)
            assert pl(m, y) == 1 - bel(m, full & ~y)
            assert q(m, y) == sum((w for f, w in m.focal.items() if y & ~f == 0), F(0))
        assert q(m, 0) == 1 and pl(m, full) == 1 and bel(m, 0) == 0


def test_belief_is_monotone_of_orders_two_and_three():
    rng = random.Random(3)
    for _ in SEEDS:
        n = rng.randint(2, 4)
        m = random_mass(rng, n, max_focal=6)
        for a in subsets(n):
            for b in subsets(n):
                assert bel(m, a | b) >= bel(m, a) + bel(m, b) - bel(m, a & b)
        for _ in range(30):
            a, b, c = (rng.randrange(1 << n) for _ in range(3))
            rhs = bel(m, a) + bel(m, b) + bel(m, c) - bel(m, a & b) - bel(m, a & c) - bel(m, b & c) + bel(m, a & b & c)
            assert bel(m, a | b | c) >= rhs


def test_float_mode_tolerance():
    rng = random.Random(4)
    m = random_mass(rng, 4, exact=False)
    back = mass_from_bel(m.universe, belief_table(m))
    assert back.approx_equal(m)


def test_pignistic_and_plausibility_transforms():
    rng = random.Random(5)
    for _ in SEEDS:
        m = random_mass(rng, rng.randint(1, 5))
        bet = pignistic(m)
        assert sum(bet.values) == 1
        plt = plausibility_transform(m)
        assert sum(plt.values) == 1
        singles = [pl(m, 1 << i) for i in range(len(m.universe))]
        assert all(v * sum(singles) == s for v, s in zip(plt.values, singles))
    with pytest.raises(MassError):
        pignistic(MassFunction(universe(2), {0: F(1, 2), 1: F(1, 2)}))


def test_bayesian_round_trip():
    v = ImportanceVector(("a", "b", "c"), (F(1, 2), F(1, 4), F(1, 4)))
    m = from_importances(v)
    assert pignistic(m) == v
    assert plausibility_transform(m) == v
    with pytest.raises(MassError):
        from_importances(ImportanceVector(("a",), (F(2),), normalized=False))
    assert ImportanceVector(("a", "b"), (1, 3), normalized=False).normalize().values == (0.25, 0.75)


def test_expand_and_contract():
    rng = random.Random(6)
    for _ in range(50):
        m = random_mass(rng, rng.randint(1, 4))
        s = rng.randint(1, 4)
        big = expand_to_scaled(m, s)
        assert len(big.universe) == s * len(m.universe)
        assert sorted(big.focal.values()) == sorted(m.focal.values())
        assert contract_to_base(big) == m
    bad = MassFunction(("x#1", "x#2"), {0b01: F(1)})
    with pytest.raises(MassError):
        contract_to_base(bad)


def test_upset_probability_counts_each_set_once():
    m = MassFunction.from_sets(universe(2), [(["y1"], F(1, 4)), (["y1", "y2"], F(3, 4))])
    assert upset_probability(m, [["y1"], 0b01, ["y2"]]) == F(1, 4)

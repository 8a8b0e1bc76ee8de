import random
from fractions import Fraction

import pytest

from agendalattice.agendas import (
    AgendaError,
    CrispAgenda,
    FocalCapExceeded,
    TotalConflict,
    argmax_focal,
    coalition_masses,
    combine_dempster,
    combine_disjunctive,
    combine_unnormalized,
    common_agenda,
    crisp_as_mass,
    distributed_agenda,
    focal_attribute_sets,
    induced_lattice_mass,
)
from agendalattice.fca import build_lattice, induce_subcontext
from agendalattice.mass import MassFunction, belief_table, q, vacuous
from agendalattice.toy import FEATURES, crisp_agendas, remark_context

from helpers import random_mass, universe

F = Fraction
SEEDS = range(120)


def commonality_product_oracle(masses):
    """Unnormalized conjunctive combination recovered from the product of commonalities."""
    n = len(masses[0].universe)
    size = 1 << n
    prod = [F(1)] * size
    for m in masses:
        for y in range(size):
            prod[y] *= q(m, y)
    # Moebius inversion over supersets
    out = list(prod)
    for i in range(n):
        for y in range(size):
            if not y >> i & 1:
                out[y] -= out[y | 1 << i]
    return {y: w for y, w in enumerate(out) if w}


def belief_product_oracle(masses):
    n = len(masses[0].universe)
    size = 1 << n
    prod = [F(1)] * size
    for m in masses:
        table = belief_table(m)
        prod = [a * b for a, b in zip(prod, table)]
    out = list(prod)
    for i in range(n):
        for y in range(size):
            if y >> i & 1:
                out[y] -= out[y ^ 1 << i]
    return {y: w for y, w in enumerate(out) if w}


def test_conjunctive_matches_commonality_product():
    rng = random.Random(10)
    for _ in SEEDS:
        n = rng.randint(1, 4)
        masses = [random_mass(rng, n, allow_empty=True) for _ in range(rng.randint(1, 3))]
        assert dict(combine_unnormalized(masses).focal) == commonality_product_oracle(masses)


def test_disjunctive_matches_belief_product():
    rng = random.Random(11)
    for _ in SEEDS:
        n = rng.randint(1, 4)
        masses = [random_mass(rng, n, allow_empty=True) for _ in range(rng.randint(1, 3))]
        assert dict(combine_disjunctive(masses).focal) == belief_product_oracle(masses)


@pytest.mark.parametrize("rule", [combine_unnormalized, combine_dempster, combine_disjunctive])
def test_commutative_and_associative(rule):
    rng = random.Random(12)
    checked = 0
    for _ in SEEDS:
        n = rng.randint(1, 4)
        a, b, c = (random_mass(rng, n) for _ in range(3))
        try:
            left = rule([rule([a, b]), c])
            right = rule([a, rule([b, c])])
            swapped = rule([b, a])
        except TotalConflict:
            continue
        assert left == right == rule([a, b, c])
        assert swapped == rule([a, b])
        checked += 1
    assert checked >= 100


def test_identities():
    rng = random.Random(13)
    for _ in SEEDS:
        n = rng.randint(1, 4)
        m = random_mass(rng, n)
        assert combine_unnormalized([m, vacuous(m.universe)]) == m
        assert combine_dempster([vacuous(m.universe), m]) == m
        empty = MassFunction(m.universe, {0: F(1)})
        assert combine_disjunctive([m, empty]) == m


def test_dempster_normalizes_conflict():
    U = universe(2)
    a = MassFunction.from_sets(U, [(["y1"], F(1, 2)), (U, F(1, 2))])
    b = MassFunction.from_sets(U, [(["y2"], F(1, 2)), (U, F(1, 2))])
    joint = combine_unnormalized([a, b])
    assert joint[0] == F(1, 4)
    d = combine_dempster([a, b])
    assert d[0] == 0 and d[["y1"]] == F(1, 3) and d[U] == F(1, 3)
    with pytest.raises(TotalConflict):
        combine_dempster([MassFunction.from_sets(U, [(["y1"], 1)]), MassFunction.from_sets(U, [(["y2"], 1)])])


def test_focal_cap():
    U = universe(8)
    full = (1 << 8) - 1
    # dropping any combination of the 8 features gives all 256 subsets
    masses = [MassFunction(U, {full & ~(1 << i): F(1, 2), full: F(1, 2)}) for i in range(8)]
    with pytest.raises(FocalCapExceeded):
        combine_unnormalized(masses)
    assert len(combine_unnormalized(masses, max_focal=256)) == 256


def test_crisp_coalitions():
    agendas = crisp_agendas()
    assert common_agenda(agendas, ["j1", "j2", "j3"]) == 0b1
    assert distributed_agenda(agendas, ["j1", "j2", "j3"]) == 0b10111
    with pytest.raises(AgendaError):
        common_agenda(agendas, [])
    with pytest.raises(AgendaError):
        common_agenda(agendas, ["j1", "j1"])
    with pytest.raises(AgendaError):
        common_agenda(agendas, ["j9"])
    masses = coalition_masses(agendas, ["j1", "j2"])
    assert combine_unnormalized(masses) == crisp_as_mass(CrispAgenda("c", FEATURES, 0b11))
    assert combine_disjunctive(masses) == crisp_as_mass(CrispAgenda("d", FEATURES, 0b10111))
    with pytest.raises(AgendaError):
        CrispAgenda("bad", FEATURES, 1 << 6)


def test_induced_lattices_and_argmax():
    ctx = remark_context()
    m = MassFunction.from_sets(ctx.attributes, [(["x"], F(1, 3)), (["y", "z"], F(2, 3))])
    assert focal_attribute_sets(m, ctx) == [(0b001, F(1, 3)), (0b110, F(2, 3))]
    induced = induced_lattice_mass(m, ctx)
    assert [w for _, _, w in induced] == [F(1, 3), F(2, 3)]
    assert induced[1][1].extents == build_lattice(induce_subcontext(ctx, 0b110)).extents
    assert argmax_focal(m) == 0b110
    tie = MassFunction.from_sets(ctx.attributes, [(["z"], F(1, 2)), (["x"], F(1, 2))])
    assert argmax_focal(tie) == 0b001

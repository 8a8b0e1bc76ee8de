"""Crisp and non-crisp (mass-function) agendas of agents and coalitions."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from . import bits
from .fca import ConceptLattice, FormalContext, build_lattice, induce_subcontext
from .mass import MassError, MassFunction, categorical

MAX_FOCAL = 64


class AgendaError(ValueError):
    pass


class FocalCapExceeded(AgendaError):
    pass


class TotalConflict(AgendaError):
    pass


@dataclass(frozen=True)
class CrispAgenda:
    agent: str
    universe: tuple[str, ...]
    features: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "universe", tuple(self.universe))
        if self.features < 0 or self.features & ~bits.full(len(self.universe)):
            raise AgendaError(f"agenda of {self.agent!r} leaves the universe")

    @classmethod
    def of(cls, agent: str, universe: Sequence[str], features: Iterable[str]) -> CrispAgenda:
        return cls(agent, tuple(universe), bits.from_names(features, universe))

    @property
    def names(self) -> list[str]:
        return bits.names(self.features, self.universe)


Agenda = CrispAgenda | MassFunction


def _members(assignment: Mapping[str, Agenda], coalition: Sequence[str]) -> list[Agenda]:
    if not coalition:
        raise AgendaError("coalition must be nonempty")
    if len(set(coalition)) != len(coalition):
        raise AgendaError("coalition lists an agent twice")
    missing = [j for j in coalition if j not in assignment]
    if missing:
        raise AgendaError(f"agents without an agenda: {missing}")
    members = [assignment[j] for j in coalition]
    universes = {a.universe for a in members}
    if len(universes) != 1:
        raise AgendaError("coalition members use different universes")
    return members


def _crisp_members(assignment: Mapping[str, Agenda], coalition: Sequence[str]) -> list[CrispAgenda]:
    members = _members(assignment, coalition)
    if not all(isinstance(a, CrispAgenda) for a in members):
        raise AgendaError("crisp combination needs crisp agendas")
    return members


def common_agenda(assignment: Mapping[str, Agenda], coalition: Sequence[str]) -> int:
    """Features every member cares about."""
    result = -1
    for a in _crisp_members(assignment, coalition):
        result &= a.features
    return result


def distributed_agenda(assignment: Mapping[str, Agenda], coalition: Sequence[str]) -> int:
    """Features at least one member cares about."""
    result = 0
    for a in _crisp_members(assignment, coalition):
        result |= a.features
    return result


def _pairwise(
    m1: MassFunction, m2: MassFunction, op: Callable[[int, int], int], max_focal: int
) -> dict[int, Real]:
    if m1.universe != m2.universe:
        raise AgendaError("masses must share one universe")
    out: dict[int, Real] = {}
    for f1, w1 in m1.focal.items():
        for f2, w2 in m2.focal.items():
            key = op(f1, f2)
            out[key] = out.get(key, 0) + w1 * w2
    nonzero = sum(1 for w in out.values() if w > 0)
    if nonzero > max_focal:
        raise FocalCapExceeded(f"combination has {nonzero} focal sets (cap {max_focal})")
    return out


def _fold(
    masses: Sequence[MassFunction], op: Callable[[int, int], int], max_focal: int
) -> MassFunction:
    if not masses:
        raise AgendaError("at least one mass function required")
    result = masses[0]
    for m in masses[1:]:
        result = MassFunction(result.universe, _pairwise(result, m, op, max_focal))
    return result


def combine_unnormalized(masses: Sequence[MassFunction], max_focal: int = MAX_FOCAL) -> MassFunction:
    """Conjunctive rule without normalization; conflict stays on the empty set."""
    return _fold(list(masses), lambda a, b: a & b, max_focal)


def combine_dempster(masses: Sequence[MassFunction], max_focal: int = MAX_FOCAL) -> MassFunction:
    """Dempster's rule: the conjunctive combination conditioned on a nonempty intersection."""
    joint = combine_unnormalized(masses, max_focal)
    conflict = joint[0]
    if conflict >= 1 or (not joint.exact and 1 - conflict <= 1e-12):
        raise TotalConflict("the masses are totally conflicting")
    norm = 1 - conflict
    return MassFunction(joint.universe, {k: w / norm for k, w in joint.focal.items() if k != 0})


def combine_disjunctive(masses: Sequence[MassFunction], max_focal: int = MAX_FOCAL) -> MassFunction:
    """Disjunctive rule: products of focal masses pushed through unions."""
    return _fold(list(masses), lambda a, b: a | b, max_focal)


def crisp_as_mass(agenda: CrispAgenda) -> MassFunction:
    return categorical(agenda.universe, agenda.features)


def coalition_masses(assignment: Mapping[str, Agenda], coalition: Sequence[str]) -> list[MassFunction]:
    return [a if isinstance(a, MassFunction) else crisp_as_mass(a) for a in _members(assignment, coalition)]


def _attribute_bits(m: MassFunction, ctx: FormalContext, subset: int) -> int:
    try:
        return ctx.attribute_set(m.names(subset))
    except KeyError as exc:
        raise MassError(f"mass feature not in the context: {exc}") from None


def focal_attribute_sets(m: MassFunction, ctx: FormalContext) -> list[tuple[int, Real]]:
    """Focal sets re-encoded over ``ctx``'s attributes (matched by identifier)."""
    return [(_attribute_bits(m, ctx, f), w) for f, w in m.focal.items()]


def induced_lattice_mass(m: MassFunction, ctx: FormalContext) -> list[tuple[int, ConceptLattice, Real]]:
    """The lattice of each focal subcontext together with the focal weight."""
    return [
        (atts, build_lattice(induce_subcontext(ctx, atts)), w)
        for atts, w in focal_attribute_sets(m, ctx)
    ]


def argmax_focal(m: MassFunction) -> int:
    """Focal set of highest mass; ties go to the first in canonical order."""
    best, best_w = None, Fraction(-1)
    for f, w in m.focal.items():
        if w > best_w:
            best, best_w = f, w
    return best

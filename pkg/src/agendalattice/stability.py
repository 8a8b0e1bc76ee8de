"""Stability index of object sets and beta-categorization lattices."""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

from . import bits
from .agendas import focal_attribute_sets
from .fca import (
    ConceptLattice,
    FormalContext,
    build_lattice,
    extent_of,
    intent_of,
    lattice_from_extents,
)
from .mass import MassFunction


class StabilityError(ValueError):
    pass


def _stable_in(ctx: FormalContext, atts: int, objs: int) -> bool:
    # closure of objs in the subcontext restricted to atts
    return extent_of(ctx, intent_of(ctx, objs) & atts) == objs


def stability_index(ctx: FormalContext, m: MassFunction, extent: int) -> Real:
    """Total mass of focal sets whose subcontext has ``extent`` as a concept extent."""
    zero = m[0] * 0
    return sum(
        (w for atts, w in focal_attribute_sets(m, ctx) if _stable_in(ctx, atts, extent)),
        zero,
    )


@dataclass(frozen=True)
class StabilityReport:
    context: FormalContext
    mass: MassFunction
    entries: tuple[tuple[int, Real], ...]

    def sorted_entries(self) -> list[tuple[int, Real]]:
        """By descending index, then canonical extent order."""
        return sorted(self.entries, key=lambda e: (-e[1], bits.sort_key(e[0])))

    def to_dict(self) -> dict:
        return {
            "entries": [
                {"extent": bits.names(e, self.context.objects), "rho": r}
                for e, r in self.sorted_entries()
            ]
        }


def stability_report(ctx: FormalContext, m: MassFunction, lattice: ConceptLattice | None = None) -> StabilityReport:
    lattice = lattice or build_lattice(ctx)
    focal = focal_attribute_sets(m, ctx)
    zero = m[0] * 0
    entries = []
    for concept in lattice.concepts:
        g = concept.extent
        rho = sum((w for atts, w in focal if _stable_in(ctx, atts, g)), zero)
        entries.append((g, rho))
    return StabilityReport(ctx, m, tuple(entries))


def _check_beta(beta: Real) -> None:
    if not 0 <= beta <= 1:
        raise StabilityError(f"beta must lie in [0, 1], got {beta}")


def stable_concepts(
    ctx: FormalContext, m: MassFunction, beta: Real, report: StabilityReport | None = None
) -> list[int]:
    """Extents of the full lattice whose stability index is at least ``beta``."""
    _check_beta(beta)
    report = report or stability_report(ctx, m)
    return [g for g, rho in report.entries if rho >= beta]


@dataclass(frozen=True)
class BetaCategorization:
    beta: Real
    generators: tuple[int, ...]
    lattice: ConceptLattice

    @property
    def extents(self) -> frozenset[int]:
        return self.lattice.extents


def meet_closure(sets: list[int], top: int) -> set[int]:
    """Close ``sets`` plus ``top`` under pairwise intersection."""
    closed = {top, *sets}
    frontier = list(closed)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in closed:
                c = a & b
                if c not in closed:
                    fresh.add(c)
        closed |= fresh
        frontier = list(fresh)
    return closed


def beta_lattice(
    ctx: FormalContext, m: MassFunction, beta: Real, report: StabilityReport | None = None
) -> BetaCategorization:
    generators = stable_concepts(ctx, m, beta, report)
    extents = meet_closure(generators, ctx.all_objects)
    return BetaCategorization(beta, tuple(sorted(generators, key=bits.sort_key)), lattice_from_extents(ctx, extents))

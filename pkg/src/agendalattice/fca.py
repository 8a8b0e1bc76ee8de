"""Formal contexts, derivation operators and concept lattices.

Object and attribute sets are int bitsets over the context's index spaces.
Identifiers only appear at the edges (constructors, exports).
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from . import bits


class ContextError(ValueError):
    """Malformed formal context or out-of-range set."""


class EnumerationGuardError(ValueError):
    """Input too large for an exhaustive procedure."""


@dataclass(frozen=True)
class FormalContext:
    """Objects x attributes incidence; ``rows[i]`` is the attribute bitset of object ``i``."""

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(set(self.objects)) != len(self.objects):
            raise ContextError("duplicate object identifiers")
        if len(set(self.attributes)) != len(self.attributes):
            raise ContextError("duplicate attribute identifiers")
        if len(self.rows) != len(self.objects):
            raise ContextError("one attribute row per object required")
        mask = bits.full(len(self.attributes))
        for obj, row in zip(self.objects, self.rows):
            if row < 0 or row & ~mask:
                raise ContextError(f"incidence of {obj!r} indexes outside the attribute list")

    @classmethod
    def from_pairs(
        cls,
        objects: Sequence[str],
        attributes: Sequence[str],
        pairs: Iterable[tuple[str, str]],
    ) -> FormalContext:
        obj_pos = {o: i for i, o in enumerate(objects)}
        att_pos = {a: i for i, a in enumerate(attributes)}
        rows = [0] * len(objects)
        for o, a in pairs:
            if o not in obj_pos or a not in att_pos:
                raise ContextError(f"incidence pair ({o!r}, {a!r}) is out of bounds")
            rows[obj_pos[o]] |= 1 << att_pos[a]
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def all_objects(self) -> int:
        return bits.full(len(self.objects))

    @property
    def all_attributes(self) -> int:
        return bits.full(len(self.attributes))

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """Object bitset of each attribute."""
        cols = [0] * len(self.attributes)
        for i, row in enumerate(self.rows):
            for j in bits.indices(row):
                cols[j] |= 1 << i
        return tuple(cols)

    def object_set(self, ids: Iterable[str]) -> int:
        return bits.from_names(ids, self.objects)

    def attribute_set(self, ids: Iterable[str]) -> int:
        return bits.from_names(ids, self.attributes)

    def pairs(self) -> list[tuple[str, str]]:
        return [
            (self.objects[i], self.attributes[j])
            for i, row in enumerate(self.rows)
            for j in bits.indices(row)
        ]


def _check_objects(ctx: FormalContext, objs: int) -> None:
    if objs < 0 or objs & ~ctx.all_objects:
        raise ContextError("object set outside the context")


def _check_attributes(ctx: FormalContext, atts: int) -> None:
    if atts < 0 or atts & ~ctx.all_attributes:
        raise ContextError("attribute set outside the context")


def intent_of(ctx: FormalContext, objs: int) -> int:
    """Attributes shared by every object in ``objs`` (all attributes for the empty set)."""
    _check_objects(ctx, objs)
    result = ctx.all_attributes
    for i in bits.indices(objs):
        result &= ctx.rows[i]
    return result


def extent_of(ctx: FormalContext, atts: int) -> int:
    """Objects having every attribute in ``atts`` (all objects for the empty set)."""
    _check_attributes(ctx, atts)
    result = ctx.all_objects
    cols = ctx.columns
    for j in bits.indices(atts):
        result &= cols[j]
    return result


def object_closure(ctx: FormalContext, objs: int) -> int:
    return extent_of(ctx, intent_of(ctx, objs))


def attribute_closure(ctx: FormalContext, atts: int) -> int:
    return intent_of(ctx, extent_of(ctx, atts))


def is_galois_stable(ctx: FormalContext, objs: int) -> bool:
    return object_closure(ctx, objs) == objs


def induce_subcontext(ctx: FormalContext, atts: int) -> FormalContext:
    """Restrict the attributes to ``atts``; identifiers and their relative order are kept."""
    _check_attributes(ctx, atts)
    keep = list(bits.indices(atts))
    rows = []
    for row in ctx.rows:
        new = 0
        for k, j in enumerate(keep):
            if row >> j & 1:
                new |= 1 << k
        rows.append(new)
    return FormalContext(ctx.objects, tuple(ctx.attributes[j] for j in keep), tuple(rows))


@dataclass(frozen=True)
class FormalConcept:
    extent: int
    intent: int


@dataclass(frozen=True)
class ConceptLattice:
    """Concepts sorted by (extent size, lexicographic extent) with Hasse covers (lower, upper)."""

    context: FormalContext
    concepts: tuple[FormalConcept, ...]
    covers: tuple[tuple[int, int], ...] = field(default=())

    @property
    def extents(self) -> frozenset[int]:
        return frozenset(c.extent for c in self.concepts)

    def __len__(self) -> int:
        return len(self.concepts)

    def index_of(self, extent: int) -> int:
        for i, c in enumerate(self.concepts):
            if c.extent == extent:
                return i
        raise KeyError("extent is not a concept of this lattice")

    def to_dict(self) -> dict:
        ctx = self.context
        return {
            "objects": list(ctx.objects),
            "attributes": list(ctx.attributes),
            "concepts": [
                {
                    "extent": bits.names(c.extent, ctx.objects),
                    "intent": bits.names(c.intent, ctx.attributes),
                }
                for c in self.concepts
            ],
            "covers": [list(edge) for edge in self.covers],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_dot(self, name: str = "lattice") -> str:
        """Hasse diagram with extent-labelled nodes, drawn bottom to top."""
        ctx = self.context
        lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
        for i, c in enumerate(self.concepts):
            label = ",".join(bits.names(c.extent, ctx.objects))
            lines.append(f"  c{i} [label={json.dumps(label)}];")
        for lo, hi in self.covers:
            lines.append(f"  c{lo} -> c{hi};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse_covers(extents: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Transitive reduction of strict inclusion on distinct sets.

    ``extents`` must be sorted by cardinality so each cover candidate is seen
    after every set it could contain.
    """
    edges = []
    for i, lo in enumerate(extents):
        accepted: list[int] = []
        for j in range(i + 1, len(extents)):
            hi = extents[j]
            if hi == lo or not bits.is_subset(lo, hi):
                continue
            if any(bits.is_subset(extents[k], hi) for k in accepted):
                continue
            accepted.append(j)
            edges.append((i, j))
    return tuple(sorted(edges))


def lattice_from_extents(ctx: FormalContext, extents: Iterable[int]) -> ConceptLattice:
    ordered = sorted(set(extents), key=bits.sort_key)
    concepts = tuple(FormalConcept(e, intent_of(ctx, e)) for e in ordered)
    return ConceptLattice(ctx, concepts, hasse_covers(ordered))


def build_lattice(ctx: FormalContext) -> ConceptLattice:
    """All formal concepts via Close-by-One with the canonicity test."""
    n = ctx.n_attributes
    cols = ctx.columns
    rows = ctx.rows
    full_attrs = ctx.all_attributes
    found: list[int] = []

    def intent(ext: int) -> int:
        result = full_attrs
        for i in bits.indices(ext):
            result &= rows[i]
        return result

    # iterative to stay clear of the recursion limit on wide contexts
    top = ctx.all_objects
    stack = [(top, intent(top), 0)]
    while stack:
        ext, itt, start = stack.pop()
        found.append(ext)
        for j in range(n - 1, start - 1, -1):
            if itt >> j & 1:
                continue
            new_ext = ext & cols[j]
            new_itt = intent(new_ext)
            below = (1 << j) - 1
            if new_itt & below == itt & below:
                stack.append((new_ext, new_itt, j + 1))
    return lattice_from_extents(ctx, found)


BRUTE_FORCE_MAX_ATTRIBUTES = 20


def brute_force_concepts(ctx: FormalContext) -> ConceptLattice:
    """Reference enumeration: close every subset of the smaller side of the context."""
    if ctx.n_attributes <= ctx.n_objects or ctx.n_objects > BRUTE_FORCE_MAX_ATTRIBUTES:
        if ctx.n_attributes > BRUTE_FORCE_MAX_ATTRIBUTES:
            raise EnumerationGuardError(
                f"brute force needs at most {BRUTE_FORCE_MAX_ATTRIBUTES} attributes or objects"
            )
        intents = {attribute_closure(ctx, y) for y in range(1 << ctx.n_attributes)}
        return lattice_from_extents(ctx, (extent_of(ctx, y) for y in intents))
    extents = {object_closure(ctx, b) for b in range(1 << ctx.n_objects)}
    return lattice_from_extents(ctx, extents)

"""Dempster-Shafer mass functions over a finite feature universe.

Focal sets are int bitsets over ``universe``.  Weights are either all
``Fraction`` (exact mode: every identity holds with ``==``) or floats, in
which case sums are compared within ``TOL``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from types import MappingProxyType

from . import bits
from .scaling import base_feature_of, scaled_attributes

TOL = 1e-9
MAX_TABLE_UNIVERSE = 16


class MassError(ValueError):
    pass


class NotABeliefFunction(MassError):
    pass


SetLike = int | Iterable[str]


def _is_exact(values: Iterable[Real]) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def _zero(exact: bool) -> Real:
    return Fraction(0) if exact else 0.0


@dataclass(frozen=True, eq=False)
class MassFunction:
    universe: tuple[str, ...]
    focal: Mapping[int, Real]

    def __post_init__(self) -> None:
        universe = tuple(self.universe)
        if len(set(universe)) != len(universe):
            raise MassError("duplicate features in the universe")
        mask = bits.full(len(universe))
        cleaned: dict[int, Real] = {}
        for subset, weight in self.focal.items():
            if subset < 0 or subset & ~mask:
                raise MassError("focal set outside the universe")
            if weight < 0:
                raise MassError(f"negative mass {weight} on {bits.names(subset, universe)}")
            if weight > 0:
                cleaned[subset] = cleaned.get(subset, 0) + weight
        total = sum(cleaned.values())
        if _is_exact(cleaned.values()):
            cleaned = {k: Fraction(v) for k, v in cleaned.items()}
            if total != 1:
                raise MassError(f"masses sum to {total}, not 1")
        elif abs(total - 1) > TOL:
            raise MassError(f"masses sum to {total}, not 1")
        object.__setattr__(self, "universe", universe)
        ordered = dict(sorted(cleaned.items(), key=lambda kv: bits.sort_key(kv[0])))
        object.__setattr__(self, "focal", MappingProxyType(ordered))

    @classmethod
    def from_sets(
        cls, universe: Sequence[str], weights: Mapping[Iterable[str], Real] | Iterable[tuple[Iterable[str], Real]]
    ) -> MassFunction:
        items = weights.items() if isinstance(weights, Mapping) else weights
        focal: dict[int, Real] = {}
        for names, w in items:
            key = bits.from_names(names, universe)
            focal[key] = focal.get(key, 0) + w
        return cls(tuple(universe), focal)

    @property
    def exact(self) -> bool:
        return _is_exact(self.focal.values())

    @property
    def full(self) -> int:
        return bits.full(len(self.universe))

    def __getitem__(self, subset: SetLike) -> Real:
        return self.focal.get(self.as_bits(subset), _zero(self.exact))

    def __len__(self) -> int:
        return len(self.focal)

    def as_bits(self, subset: SetLike) -> int:
        if isinstance(subset, int):
            if subset < 0 or subset & ~self.full:
                raise MassError("set outside the universe")
            return subset
        return bits.from_names(subset, self.universe)

    def names(self, subset: int) -> list[str]:
        return bits.names(subset, self.universe)

    def approx_equal(self, other: MassFunction, tol: float = TOL) -> bool:
        if self.universe != other.universe:
            return False
        keys = set(self.focal) | set(other.focal)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self.universe == other.universe and dict(self.focal) == dict(other.focal)

    def __repr__(self) -> str:
        parts = ", ".join(f"{{{','.join(self.names(k))}}}: {v}" for k, v in self.focal.items())
        return f"MassFunction({parts})"

    def to_dict(self, level: str = "base") -> dict:
        return {
            "universe": list(self.universe),
            "level": level,
            "focal": [{"set": self.names(k), "mass": v} for k, v in self.focal.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> MassFunction:
        try:
            universe = [str(u) for u in data["universe"]]
            entries = [(e["set"], _read_weight(e["mass"])) for e in data["focal"]]
        except (KeyError, TypeError) as exc:
            raise MassError(f"malformed mass JSON: {exc}") from None
        return cls.from_sets(universe, entries)


def _read_weight(value) -> Real:
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        raise MassError(f"mass must be a number or a fraction string, got {value!r}")
    return value


def vacuous(universe: Sequence[str]) -> MassFunction:
    return MassFunction(tuple(universe), {bits.full(len(universe)): Fraction(1)})


def categorical(universe: Sequence[str], subset: SetLike) -> MassFunction:
    universe = tuple(universe)
    key = subset if isinstance(subset, int) else bits.from_names(subset, universe)
    return MassFunction(universe, {key: Fraction(1)})


def simple_mass(universe: Sequence[str], subset: SetLike, alpha: Real) -> MassFunction:
    """Mass ``alpha`` on ``subset`` and ``1 - alpha`` on the whole universe."""
    universe = tuple(universe)
    key = subset if isinstance(subset, int) else bits.from_names(subset, universe)
    full = bits.full(len(universe))
    if not 0 <= alpha <= 1:
        raise MassError(f"alpha must lie in [0, 1], got {alpha}")
    if key == full:
        raise MassError("a simple mass needs a proper subset; use vacuous() for the universe")
    return MassFunction(universe, {key: alpha, full: 1 - alpha})


@dataclass(frozen=True)
class ImportanceVector:
    features: tuple[str, ...]
    values: tuple[Real, ...]
    normalized: bool = True

    def __post_init__(self) -> None:
        if len(self.features) != len(self.values):
            raise MassError("one importance value per feature required")
        if any(v < 0 for v in self.values):
            raise MassError("importance values must be nonnegative")
        if self.normalized:
            total = sum(self.values)
            exact = _is_exact(self.values)
            if (exact and total != 1) or (not exact and abs(total - 1) > TOL):
                raise MassError(f"normalized importances sum to {total}")

    def as_dict(self) -> dict[str, Real]:
        return dict(zip(self.features, self.values))

    def normalize(self) -> ImportanceVector:
        total = sum(self.values)
        if total <= 0:
            raise MassError("cannot normalize an all-zero importance vector")
        return ImportanceVector(self.features, tuple(v / total for v in self.values), True)


def from_importances(v: ImportanceVector) -> MassFunction:
    """Bayesian mass with ``v(y)`` on each singleton ``{y}``.

    A per-feature importance vector is read as mass on singletons only;
    summing importances over every subset would not normalize.
    """
    if not v.normalized:
        raise MassError("importance vector must be normalized first")
    return MassFunction(v.features, {1 << i: w for i, w in enumerate(v.values) if w > 0})


def bel(m: MassFunction, subset: SetLike) -> Real:
    y = m.as_bits(subset)
    return sum((w for f, w in m.focal.items() if bits.is_subset(f, y)), _zero(m.exact))


def pl(m: MassFunction, subset: SetLike) -> Real:
    y = m.as_bits(subset)
    return sum((w for f, w in m.focal.items() if f & y), _zero(m.exact))


def q(m: MassFunction, subset: SetLike) -> Real:
    y = m.as_bits(subset)
    return sum((w for f, w in m.focal.items() if bits.is_subset(y, f)), _zero(m.exact))


def belief_table(m: MassFunction) -> list[Real]:
    """``bel`` of every subset, indexed by bitset."""
    n = len(m.universe)
    if n > MAX_TABLE_UNIVERSE:
        raise MassError(f"table functions need at most {MAX_TABLE_UNIVERSE} features")
    table = [_zero(m.exact)] * (1 << n)
    for f, w in m.focal.items():
        table[f] += w
    for i in range(n):
        bit = 1 << i
        for x in range(1 << n):
            if x & bit:
                table[x] += table[x ^ bit]
    return table


def mass_from_bel(universe: Sequence[str], table: Sequence[Real] | Mapping[int, Real]) -> MassFunction:
    """Moebius inversion of a belief table indexed by bitset over ``universe``."""
    n = len(universe)
    if n > MAX_TABLE_UNIVERSE:
        raise MassError(f"table functions need at most {MAX_TABLE_UNIVERSE} features")
    size = 1 << n
    if isinstance(table, Mapping):
        values = [table[x] for x in range(size)]
    else:
        values = list(table)
    if len(values) != size:
        raise MassError(f"belief table needs {size} entries, got {len(values)}")
    exact = _is_exact(values)
    f = [Fraction(v) for v in values] if exact else [float(v) for v in values]
    for i in range(n):
        bit = 1 << i
        for x in range(size):
            if x & bit:
                f[x] -= f[x ^ bit]
    focal = {}
    for x, w in enumerate(f):
        if w < 0:
            if exact or w < -TOL:
                raise NotABeliefFunction(f"inversion gives mass {w} on {bits.names(x, universe)}")
            continue
        if exact or w > TOL:
            focal[x] = w
    return MassFunction(tuple(universe), focal)


def expand_to_scaled(m: MassFunction, s: int) -> MassFunction:
    """Each base feature becomes its ``s`` interval attributes ``f#1..f#s``."""
    if s < 1:
        raise MassError("s must be at least 1")
    scaled = scaled_attributes(m.universe, s)
    block = bits.full(s)
    focal = {}
    for f, w in m.focal.items():
        key = 0
        for i in bits.indices(f):
            key |= block << (i * s)
        focal[key] = w
    return MassFunction(scaled, focal)


def contract_to_base(m: MassFunction) -> MassFunction:
    """Inverse of :func:`expand_to_scaled`; focal sets must consist of whole feature blocks."""
    features: list[str] = []
    members: dict[str, set[int]] = {}
    for name in m.universe:
        feat, k = base_feature_of(name)
        if feat not in members:
            features.append(feat)
            members[feat] = set()
        members[feat].add(k)
    s_values = {len(ks) for ks in members.values()}
    if len(s_values) != 1:
        raise MassError("scaled universe has an uneven number of intervals per feature")
    focal = {}
    for f, w in m.focal.items():
        chosen: dict[str, int] = {}
        for name in m.names(f):
            feat, _ = base_feature_of(name)
            chosen[feat] = chosen.get(feat, 0) + 1
        if any(count != len(members[feat]) for feat, count in chosen.items()):
            raise MassError(f"focal set {m.names(f)} splits a feature's intervals")
        key = bits.from_names(chosen, features)
        focal[key] = focal.get(key, 0) + w
    return MassFunction(tuple(features), focal)


def pignistic(m: MassFunction) -> ImportanceVector:
    """Share each focal mass equally among its members."""
    if m[0] > 0:
        raise MassError("pignistic transform is undefined with mass on the empty set")
    values = [_zero(m.exact)] * len(m.universe)
    for f, w in m.focal.items():
        share = w / bits.popcount(f)
        for i in bits.indices(f):
            values[i] += share
    return ImportanceVector(m.universe, tuple(values))


def plausibility_transform(m: MassFunction) -> ImportanceVector:
    """Singleton plausibilities, normalized."""
    singles = [pl(m, 1 << i) for i in range(len(m.universe))]
    total = sum(singles)
    if total <= 0:
        raise MassError("all singleton plausibilities are zero")
    return ImportanceVector(m.universe, tuple(v / total for v in singles))


def upset_probability(m: MassFunction, family: Iterable[SetLike]) -> Real:
    """Total mass of the members of ``family`` (duplicates counted once)."""
    keys = {m.as_bits(y) for y in family}
    return sum((m[k] for k in keys), _zero(m.exact))

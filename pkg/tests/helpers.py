"""Random instance generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from agendalattice.fca import FormalContext
from agendalattice.mass import MassFunction


def random_context(rng: random.Random, n_objects: int, n_attributes: int, density: float = 0.4) -> FormalContext:
    rows = tuple(
        sum(1 << j for j in range(n_attributes) if rng.random() < density) for _ in range(n_objects)
    )
    return FormalContext(
        tuple(f"o{i}" for i in range(n_objects)), tuple(f"x{j}" for j in range(n_attributes)), rows
    )


def universe(n: int) -> tuple[str, ...]:
    return tuple(f"y{i + 1}" for i in range(n))


def random_weights(rng: random.Random, k: int, denominator: int = 20) -> list[Fraction]:
    """k positive Fractions summing to 1."""
    cuts = sorted(rng.sample(range(1, denominator), k - 1))
    points = [0, *cuts, denominator]
    return [Fraction(b - a, denominator) for a, b in zip(points, points[1:])]


def random_mass(
    rng: random.Random,
    n: int,
    max_focal: int = 4,
    allow_empty: bool = False,
    exact: bool = True,
) -> MassFunction:
    lo = 0 if allow_empty else 1
    pool = list(range(lo, 1 << n))
    k = rng.randint(1, min(max_focal, len(pool)))
    sets = rng.sample(pool, k)
    weights = random_weights(rng, k, max(20, k + 1))
    if not exact:
        weights = [float(w) for w in weights]
    return MassFunction(universe(n), dict(zip(sets, weights)))

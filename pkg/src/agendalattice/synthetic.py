"""Planted-outlier data for exercising the agenda meta-learner.

Inliers put features f1 and f2 in the same interval; outliers put them in
different intervals, at most a few per cell, so only the agenda {f1, f2}
isolates them into small categories.  The remaining features are noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fca import FormalContext
from .metalearn import AgendaBank, TrainingSet
from .scaling import ManyValuedContext, ScalingSpec, interval_scale, scaled_name

FEATURES = ("f1", "f2", "f3", "f4", "f5")
PLANTED = ("f1", "f2")
BANK = (
    ("f1",),
    ("f2",),
    ("f3",),
    ("f4",),
    ("f5",),
    ("f1", "f3"),
    ("f2", "f4"),
    PLANTED,
)


@dataclass(frozen=True)
class PlantedData:
    mv: ManyValuedContext
    context: FormalContext
    bank: AgendaBank
    planted: int
    labels: dict[str, int]
    train: TrainingSet
    holdout: TrainingSet


def _value_in(rng: np.random.Generator, k: int, s: int) -> float:
    """A value strictly inside interval k (1-based) of the s-grid on [-1, 1]."""
    width = 2.0 / s
    lo = -1.0 + (k - 1) * width
    return round(float(lo + width * rng.uniform(0.1, 0.9)), 6)


def scaled_bank(features: tuple[tuple[str, ...], ...], s: int, attributes: tuple[str, ...]) -> AgendaBank:
    agendas = [[scaled_name(f, k) for f in group for k in range(1, s + 1)] for group in features]
    return AgendaBank.from_names(attributes, agendas)


def planted_outliers(
    n_objects: int = 200,
    n_outliers: int = 20,
    s: int = 4,
    per_cell: int = 3,
    seed: int = 0,
    pos_weight: float = 10.0,
) -> PlantedData:
    rng = np.random.default_rng(seed)
    off_diagonal = [(i, j) for i in range(1, s + 1) for j in range(1, s + 1) if i != j]
    if n_outliers > per_cell * len(off_diagonal):
        raise ValueError("too many outliers for the off-diagonal cells")
    cells = [c for c in off_diagonal for _ in range(per_cell)]
    picked = rng.permutation(len(cells))[:n_outliers]
    outlier_cells = [cells[i] for i in picked]

    objects = tuple(f"o{i + 1}" for i in range(n_objects))
    order = rng.permutation(n_objects)
    outlier_ids = {objects[i] for i in order[:n_outliers]}
    values = []
    cell_iter = iter(outlier_cells)
    for obj in objects:
        if obj in outlier_ids:
            k1, k2 = next(cell_iter)
        else:
            k1 = k2 = int(rng.integers(1, s + 1))
        row = [_value_in(rng, k1, s), _value_in(rng, k2, s)]
        row += [_value_in(rng, int(rng.integers(1, s + 1)), s) for _ in FEATURES[2:]]
        values.append(tuple(row))
    mv = ManyValuedContext(objects, FEATURES, tuple(values))
    ctx = interval_scale(mv, ScalingSpec(s))
    bank = scaled_bank(BANK, s, ctx.attributes)
    labels = {o: int(o in outlier_ids) for o in objects}

    # stratified half split
    train_ids: list[str] = []
    hold_ids: list[str] = []
    for cls in (1, 0):
        members = [o for o in objects if labels[o] == cls]
        members = [members[i] for i in rng.permutation(len(members))]
        half = len(members) // 2
        train_ids += members[:half]
        hold_ids += members[half:]
    train_ids.sort(key=objects.index)
    hold_ids.sort(key=objects.index)
    return PlantedData(
        mv=mv,
        context=ctx,
        bank=bank,
        planted=bank.agendas[BANK.index(PLANTED)],
        labels=labels,
        train=TrainingSet(tuple(train_ids), tuple(labels[o] for o in train_ids), pos_weight),
        holdout=TrainingSet(tuple(hold_ids), tuple(labels[o] for o in hold_ids), pos_weight),
    )

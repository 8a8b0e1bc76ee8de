"""Many-valued contexts over [-1, 1] and interval scaling to 2-valued contexts."""

from __future__ import annotations

import csv
import io
import math
import re
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .fca import FormalContext

SEPARATOR = "#"
_SCALED_ID = re.compile(r"^(?P<feature>.+)#(?P<k>[1-9][0-9]*)$")


class ScalingError(ValueError):
    pass


@dataclass(frozen=True)
class ManyValuedContext:
    objects: tuple[str, ...]
    features: tuple[str, ...]
    values: tuple[tuple[Real, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "values", tuple(tuple(r) for r in self.values))
        if len(set(self.objects)) != len(self.objects):
            raise ScalingError("duplicate object identifiers")
        if len(set(self.features)) != len(self.features):
            raise ScalingError("duplicate feature identifiers")
        if len(self.values) != len(self.objects):
            raise ScalingError("value matrix must have one row per object")
        for obj, row in zip(self.objects, self.values):
            if len(row) != len(self.features):
                raise ScalingError(f"row {obj!r} has {len(row)} values, expected {len(self.features)}")
            for feat, v in zip(self.features, row):
                if isinstance(v, float) and math.isnan(v) or not -1 <= v <= 1:
                    raise ScalingError(f"value {v} at ({obj!r}, {feat!r}) lies outside [-1, 1]")

    def value(self, obj: str, feature: str) -> Real:
        return self.values[self.objects.index(obj)][self.features.index(feature)]


@dataclass(frozen=True)
class ScalingSpec:
    s: int

    def __post_init__(self) -> None:
        if isinstance(self.s, bool) or not isinstance(self.s, int) or self.s < 1:
            raise ScalingError(f"number of intervals must be a positive integer, got {self.s!r}")


def scaled_name(feature: str, k: int) -> str:
    return f"{feature}{SEPARATOR}{k}"


def base_feature_of(attr_id: str) -> tuple[str, int]:
    match = _SCALED_ID.match(attr_id)
    if match is None:
        raise ScalingError(f"not a scaled attribute identifier: {attr_id!r}")
    return match["feature"], int(match["k"])


def scaled_attributes(features: Sequence[str], s: int) -> tuple[str, ...]:
    return tuple(scaled_name(f, k) for f in features for k in range(1, s + 1))


def interval_index(value: Real, s: int) -> int:
    """1-based interval of ``value``; [lo, hi) except the last interval, which is closed."""
    if not -1 <= value <= 1:
        raise ScalingError(f"value {value} outside [-1, 1]")
    # floats are read as their shortest decimal so grid points like -0.2 land on the boundary exactly
    exact = Fraction(repr(float(value))) if isinstance(value, float) else Fraction(value)
    pos = (exact + 1) * s / 2
    return min(math.floor(pos) + 1, s)


def interval_scale(mvc: ManyValuedContext, spec: ScalingSpec) -> FormalContext:
    s = spec.s
    rows = []
    for row in mvc.values:
        bitset = 0
        for i, v in enumerate(row):
            bitset |= 1 << (i * s + interval_index(v, s) - 1)
        rows.append(bitset)
    return FormalContext(mvc.objects, scaled_attributes(mvc.features, s), tuple(rows))


def _parse_number(text: str) -> Real:
    text = text.strip()
    if not text:
        return 0.0
    if "/" in text:
        return Fraction(text)
    return float(text)


def read_mv_csv(source: str | io.TextIOBase) -> ManyValuedContext:
    """Read ``object,<feature1>,...`` rows; empty cells are 0."""
    handle = open(source, newline="", encoding="utf-8") if isinstance(source, str) else source
    try:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[0].strip() != "object":
            raise ScalingError("many-valued CSV must start with an 'object' column")
        features = [h.strip() for h in header[1:]]
        objects, values = [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) > len(header):
                raise ScalingError(f"line {lineno}: too many cells")
            rec = rec + [""] * (len(header) - len(rec))
            objects.append(rec[0].strip())
            try:
                values.append([_parse_number(c) for c in rec[1:]])
            except ValueError as exc:
                raise ScalingError(f"line {lineno}: {exc}") from None
    finally:
        if isinstance(source, str):
            handle.close()
    return ManyValuedContext(tuple(objects), tuple(features), tuple(tuple(r) for r in values))


def format_number(v: Real) -> str:
    if v == 0:
        return "0"
    return f"{float(v):.12g}"


def write_mv_csv(mvc: ManyValuedContext) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["object", *mvc.features])
    for obj, row in zip(mvc.objects, mvc.values):
        writer.writerow([obj, *(format_number(v) for v in row)])
    return out.getvalue()


def write_crosstable_csv(ctx: FormalContext) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["object", *ctx.attributes])
    for obj, row in zip(ctx.objects, ctx.rows):
        writer.writerow([obj, *("1" if row >> j & 1 else "0" for j in range(ctx.n_attributes))])
    return out.getvalue()


def read_crosstable_csv(path: str) -> FormalContext:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[0].strip() != "object":
            raise ScalingError("cross-table CSV must start with an 'object' column")
        attributes = [h.strip() for h in header[1:]]
        objects, rows = [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            objects.append(rec[0].strip())
            row = 0
            for j, cell in enumerate(rec[1:]):
                cell = cell.strip()
                if cell in ("1", "x", "X"):
                    row |= 1 << j
                elif cell not in ("", "0"):
                    raise ScalingError(f"line {lineno}: cross-table cells must be 0/1, got {cell!r}")
            rows.append(row)
    return FormalContext(tuple(objects), tuple(attributes), tuple(rows))

"""Small helpers for sets encoded as Python integers (bit i set <=> element i present)."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence


def full(n: int) -> int:
    return (1 << n) - 1


def from_indices(indices: Iterable[int]) -> int:
    bits = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"negative index {i}")
        bits |= 1 << i
    return bits


def indices(bits: int) -> Iterator[int]:
    """Yield set positions in increasing order."""
    i = 0
    while bits:
        if bits & 1:
            yield i
        bits >>= 1
        i += 1


def popcount(bits: int) -> int:
    return bits.bit_count()


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def names(bits: int, labels: Sequence[str]) -> list[str]:
    return [labels[i] for i in indices(bits)]


def from_names(items: Iterable[str], labels: Sequence[str]) -> int:
    """Encode identifiers against ``labels``; unknown identifiers raise KeyError."""
    position = {label: i for i, label in enumerate(labels)}
    bits = 0
    for item in items:
        try:
            bits |= 1 << position[item]
        except KeyError:
            raise KeyError(f"unknown identifier {item!r}") from None
    return bits


def sort_key(bits: int) -> tuple[int, tuple[int, ...]]:
    """Order by cardinality, then lexicographically by member indices."""
    return popcount(bits), tuple(indices(bits))

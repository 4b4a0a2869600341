"""Deterministic ordering helpers.

Seeded selection in this pipeline never uses Python's RNG state directly:
items are ranked by the SHA-256 digest of the seed and a per-item key, which
makes every shuffle a pure function of (seed, keys) and keeps outputs
byte-identical across platforms, Python versions and process restarts.
"""

from __future__ import annotations

import hashlib
from collections.abc import Callable, Iterable, Sequence
from fractions import Fraction
from typing import TypeVar

T = TypeVar("T")


def as_fraction(value: float | int | str | Fraction) -> Fraction:
    """Exact rational from a decimal literal; floats go through str so 0.15
    means 3/20, not the nearest binary float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def stable_rank(seed: int, *key_parts: object) -> bytes:
    """Digest used as a deterministic pseudo-random sort key."""
    material = "\x1f".join([str(seed), *[str(p) for p in key_parts]])
    return hashlib.sha256(material.encode("utf-8")).digest()


def stable_shuffle(items: Iterable[T], seed: int, key: Callable[[T], object],
                   domain: str) -> list[T]:
    """Return items in seeded pseudo-random order.

    ``domain`` namespaces the shuffle so different pipeline stages sharing a
    seed do not correlate. ``key(item)`` must be unique within the call.
    """
    return sorted(items, key=lambda item: stable_rank(seed, domain, key(item)))


def stable_sample(items: Sequence[T], k: int, seed: int, key: Callable[[T], object],
                  domain: str) -> list[T]:
    """First ``k`` items of the seeded order, returned in their original order."""
    if k >= len(items):
        return list(items)
    order = sorted(range(len(items)),
                   key=lambda i: stable_rank(seed, domain, key(items[i])))
    keep = set(order[:k])
    return [item for i, item in enumerate(items) if i in keep]

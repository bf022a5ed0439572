"""Deterministic, order-free random choice protocol.

Every stochastic decision in the conversation engine (sentence picks, topic
draws, queue shuffles) is derived by hashing the turn seed together with a
label and the decision context, instead of consuming a shared RNG stream.
Two consequences matter:

* a turn is a pure function of its inputs: same seed, same state, same
  outputs, regardless of how many decisions run or in which order;
* any independent re-implementation of the control flow reproduces the
  exact picks by calling these primitives with the same context.
"""

from __future__ import annotations

import hashlib
import secrets
from typing import Sequence, TypeVar

T = TypeVar("T")

_HASH_BITS = 128
_HASH_SPAN = 1 << _HASH_BITS


def random_seed() -> int:
    """Fresh entropy for callers that were not given a seed."""
    return secrets.randbits(63)


def derive(seed: int, *context: object) -> int:
    """Hash (seed, context...) into a reproducible integer."""
    material = repr((int(seed),) + tuple(context)).encode("utf-8")
    digest = hashlib.sha256(material).digest()
    return int.from_bytes(digest[: _HASH_BITS // 8], "big")


def unit_float(seed: int, *context: object) -> float:
    """Uniform float in [0, 1) derived from (seed, context...)."""
    return derive(seed, *context) / _HASH_SPAN


def pick_index(seed: int, n: int, *context: object) -> int:
    """Uniform index in [0, n). n must be positive."""
    if n <= 0:
        raise ValueError("cannot pick from an empty candidate set")
    return derive(seed, *context) % n


def pick(seed: int, items: Sequence[T], *context: object) -> T:
    return items[pick_index(seed, len(items), *context)]


def pick_weighted(seed: int, items: Sequence[T], weights: Sequence[float], *context: object) -> T:
    """Weighted draw over items; weights need not be normalized."""
    if not items:
        raise ValueError("cannot pick from an empty candidate set")
    if len(items) != len(weights):
        raise ValueError("items and weights must have equal length")
    total = float(sum(weights))
    if total <= 0.0:
        return pick(seed, items, *context)
    point = unit_float(seed, *context) * total
    cumulative = 0.0
    for item, weight in zip(items, weights):
        cumulative += weight
        if point < cumulative:
            return item
    return items[-1]


def shuffled(seed: int, items: Sequence[T], *context: object) -> list[T]:
    """Fisher-Yates shuffle keyed off (seed, context...); input untouched."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = derive(seed, "shuffle", i, *context) % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out

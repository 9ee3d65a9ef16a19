"""Generation of small posets: exhaustive up to isomorphism, and random.

The exhaustive generator extends every (n-1)-point class by one new maximal
element whose strict down-set ranges over the down-closed subsets; every
n-point poset arises this way from deleting a maximal element, and the
isomorphism classes are separated by the exact canonical key.

Element labels are e1, e2, ... throughout.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .poset import Poset


def _label(i: int) -> str:
    return f"e{i + 1}"


@lru_cache(maxsize=None)
def all_posets(n: int) -> tuple[Poset, ...]:
    """All posets with n elements, one representative per isomorphism class."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return (Poset([], []),)
    if n == 1:
        return (Poset.from_covers([_label(0)], []),)
    smaller = all_posets(n - 1)
    seen: dict[tuple, Poset] = {}
    new = _label(n - 1)
    for q in smaller:
        down_sets = [q.mask_to_labels(m) for m in _down_set_masks(q)]
        for down in down_sets:
            labels = list(q.elements) + [new]
            pairs = list(q.covers) + [
                (x, new) for x in _maximal_of(q, down)
            ]
            cand = Poset.from_covers(labels, pairs)
            key = cand.canonical_key()
            if key not in seen:
                seen[key] = cand
    return tuple(seen.values())


def _down_set_masks(p: Poset) -> list[int]:
    n = len(p.elements)
    full = (1 << n) - 1
    # down-sets are complements of up-sets
    return [full & ~m for m in p.closed_set_masks()]


def _maximal_of(p: Poset, subset: frozenset[str]) -> list[str]:
    return sorted(
        x for x in subset if not any(y != x and p.leq(x, y) for y in subset)
    )


def random_poset(rng: random.Random, n: int) -> Poset:
    """Random poset on n elements: a random DAG on a shuffled linear order,
    transitively closed by construction of the cover relation."""
    labels = [_label(i) for i in range(n)]
    order = labels[:]
    rng.shuffle(order)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                pairs.append((order[i], order[j]))
    return Poset.from_covers(labels, pairs)


def random_forest(rng: random.Random, n: int) -> Poset:
    """Random forest: every non-root element covers exactly one parent."""
    labels = [_label(i) for i in range(n)]
    pairs = []
    for i in range(1, n):
        if rng.random() < 0.8:
            parent = rng.randrange(i)
            pairs.append((labels[parent], labels[i]))
    return Poset.from_covers(labels, pairs)


def circle_poset(k: int) -> Poset:
    """Alternating 2k-point circle: minimal m_i under maximal M_i and
    M_{i-1}, cyclically; k = 2 is the four-point circle."""
    if k < 2:
        raise ValueError("need at least two arcs")
    lows = [f"m{i}" for i in range(k)]
    highs = [f"M{i}" for i in range(k)]
    pairs = []
    for i in range(k):
        pairs.append((lows[i], highs[i]))
        pairs.append((lows[(i + 1) % k], highs[i]))
    return Poset.from_covers(lows + highs, pairs)


def random_defector_values(rng: random.Random, p: Poset) -> dict[str, int | float]:
    """A random valid defector: positive on maximal points."""
    maxima = p.maximal_points()
    values: dict[str, int | float] = {}
    for x in p.elements:
        if x in maxima:
            values[x] = rng.choice([1, 1, 2, 3, float("inf")])
        else:
            values[x] = rng.choice([0, 0, 1, 2, float("inf")])
    return values

"""Finitary topological approximation: quotient a covered sample to a poset.

A finite sample of a space together with a distinguished open cover is
reduced by identifying points with the same cover-membership fingerprint;
the classes inherit the quotient topology, which on a finite space is a
specialization order.  The resulting space is always T0.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import ParseError, UnknownLabel
from .poset import Poset, subset_sort_key


class CoveredSpace:
    """A finite point sample with a named open cover.

    The cover members must be nonempty and their union must be the whole
    point set.
    """

    __slots__ = ("points", "cover")

    def __init__(self, points: Sequence[str], cover: Iterable[tuple[str, Iterable[str]]]):
        self.points: tuple[str, ...] = tuple(points)
        universe = frozenset(self.points)
        if len(universe) != len(self.points):
            raise UnknownLabel("duplicate point labels")
        self.cover: tuple[tuple[str, frozenset[str]], ...] = tuple(
            (name, frozenset(members)) for name, members in cover
        )
        covered: set[str] = set()
        for name, members in self.cover:
            if not members:
                raise ParseError(f"cover member {name} is empty")
            extra = members - universe
            if extra:
                raise UnknownLabel(sorted(extra)[0])
            covered |= members
        if covered != universe:
            missing = sorted(universe - covered)
            raise ParseError(f"cover does not reach point(s): {', '.join(missing)}")

    def fingerprint(self, point: str) -> frozenset[str]:
        if point not in self.points:
            raise UnknownLabel(point)
        return frozenset(name for name, members in self.cover if point in members)


def topology_of(space: CoveredSpace) -> list[frozenset[str]]:
    """Smallest family containing the cover, closed under union and
    intersection, plus the empty set and the full point set.

    Returned in canonical order (cardinality, then lex).
    """
    family: set[frozenset[str]] = {frozenset(), frozenset(space.points)}
    family.update(members for _, members in space.cover)
    frontier = list(family)
    while frontier:
        fresh: list[frozenset[str]] = []
        for a in frontier:
            for b in list(family):
                for c in (a | b, a & b):
                    if c not in family:
                        family.add(c)
                        fresh.append(c)
        frontier = fresh
    return sorted(family, key=subset_sort_key)


def quotient_poset(space: CoveredSpace) -> tuple[Poset, dict[str, str]]:
    """Quotient by the fingerprint equivalence; returns (poset, projection).

    Classes are labeled by their lexicographically least member.  The order
    is specialization: [x] <= [y] iff every open set containing y contains x,
    which for a generated topology reduces to fingerprint containment.
    """
    classes: dict[frozenset[str], list[str]] = {}
    for p in space.points:
        classes.setdefault(space.fingerprint(p), []).append(p)
    labels = {fp: min(members) for fp, members in classes.items()}
    # [x] <= [y]  iff  fingerprint(y) is a subset of fingerprint(x)
    ordered = sorted(labels.items(), key=lambda kv: kv[1])
    names = [label for _, label in ordered]
    pairs = [
        (labels[fa], labels[fb])
        for fa, _ in ordered
        for fb, _ in ordered
        if fa != fb and fb < fa
    ]
    poset = Poset.from_covers(names, _reduction(names, pairs))
    projection = {p: labels[space.fingerprint(p)] for p in space.points}
    return poset, projection


def _reduction(names: list[str], strict_pairs: list[tuple[str, str]]) -> list[tuple[str, str]]:
    # from_covers would accept the full strict order, but feeding it the
    # reduction keeps witnesses in errors short
    pairs = set(strict_pairs)
    keep = []
    for a, b in pairs:
        if not any((a, c) in pairs and (c, b) in pairs for c in names if c not in (a, b)):
            keep.append((a, b))
    return keep


def parse_covered_space(text: str) -> CoveredSpace:
    """Parse the covered-space format: a ``points:`` line then ``open N: ...`` lines."""
    points: list[str] | None = None
    cover: list[tuple[str, list[str]]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("points:"):
            if points is not None:
                raise ParseError("duplicate points line")
            points = line[len("points:"):].split()
        elif line.startswith("open "):
            head, _, rest = line.partition(":")
            name = head[len("open "):].strip()
            if not name or not rest.strip():
                raise ParseError(f"expected 'open NAME: p1 p2 ...', got {line!r}")
            cover.append((name, rest.split()))
        else:
            raise ParseError(f"unrecognized line {line!r}")
    if points is None:
        raise ParseError("missing points line")
    return CoveredSpace(points, cover)

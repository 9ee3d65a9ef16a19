from __future__ import annotations

import random

import pytest

from posetaf.errors import ParseError, UnknownLabel
from posetaf.poset import Poset
from posetaf.quotient import (
    CoveredSpace,
    parse_covered_space,
    quotient_poset,
    topology_of,
)

CIRCLE_SAMPLE = CoveredSpace(
    ["a1", "a2", "c1", "c2", "b1", "b2", "d1", "d2"],
    [
        ("O1", ["a1", "a2"]),
        ("O2", ["a1", "a2", "b1", "b2", "c1", "c2"]),
        ("O3", ["b1", "b2"]),
        ("O4", ["a1", "a2", "b1", "b2", "d1", "d2"]),
    ],
)


def brute_topology(space: CoveredSpace) -> set[frozenset[str]]:
    """Independent oracle: iterate pairwise unions/intersections to a fixed
    point, seeded with the cover, the empty set and the full set."""
    family = {frozenset(), frozenset(space.points)}
    family |= {m for _, m in space.cover}
    while True:
        fresh = {
            op
            for a in family
            for b in family
            for op in (a | b, a & b)
            if op not in family
        }
        if not fresh:
            return family
        family |= fresh


def test_covered_space_validation():
    with pytest.raises(ParseError):
        CoveredSpace(["p"], [("O1", [])])
    with pytest.raises(ParseError):
        CoveredSpace(["p", "r"], [("O1", ["p"])])
    with pytest.raises(UnknownLabel):
        CoveredSpace(["p"], [("O1", ["p", "zz"])])


def test_topology_indiscrete():
    space = CoveredSpace(["p", "r"], [("O1", ["p", "r"])])
    assert topology_of(space) == [frozenset(), frozenset({"p", "r"})]


def test_topology_discrete():
    space = CoveredSpace(["p", "r", "s"], [("A", ["p"]), ("B", ["r"]), ("C", ["s"])])
    assert len(topology_of(space)) == 8


def test_topology_circle_matches_oracle():
    got = topology_of(CIRCLE_SAMPLE)
    assert set(got) == brute_topology(CIRCLE_SAMPLE)
    # the generated family here is exactly the quotient's open-set lattice
    assert len(got) == 7
    # images of the basic opens of the quotient are present
    assert frozenset({"a1", "a2"}) in got
    assert frozenset({"b1", "b2"}) in got
    assert frozenset({"a1", "a2", "b1", "b2", "c1", "c2"}) in got
    assert frozenset({"a1", "a2", "b1", "b2", "d1", "d2"}) in got


def test_quotient_circle(p4s1):
    poset, projection = quotient_poset(CIRCLE_SAMPLE)
    assert poset.is_isomorphic(p4s1)
    assert projection["a2"] == "a1" and projection["d2"] == "d1"
    # relations mirror the circle poset: both arc classes sit under both caps
    assert poset.leq("a1", "c1") and poset.leq("a1", "d1")
    assert poset.leq("b1", "c1") and poset.leq("b1", "d1")


def test_quotient_discrete_is_antichain():
    space = CoveredSpace(["p", "r"], [("A", ["p"]), ("B", ["r"])])
    poset, projection = quotient_poset(space)
    assert set(poset.elements) == {"p", "r"}
    assert poset.covers == frozenset()
    assert len(set(projection.values())) == 2


def test_quotient_indiscrete_is_point():
    space = CoveredSpace(["p", "r", "s"], [("A", ["p", "r", "s"])])
    poset, projection = quotient_poset(space)
    assert len(poset) == 1
    assert set(projection.values()) == {"p"}


def _random_space(rng: random.Random) -> CoveredSpace:
    n = rng.randrange(2, 8)
    points = [f"m{i}" for i in range(n)]
    cover = []
    for j in range(rng.randrange(1, 5)):
        members = [x for x in points if rng.random() < 0.5]
        if members:
            cover.append((f"O{j}", members))
    covered = {x for _, ms in cover for x in ms}
    missing = [x for x in points if x not in covered]
    if missing:
        cover.append(("Orest", missing))
    return CoveredSpace(points, cover)


def test_projection_is_continuous_and_surjective():
    rng = random.Random(7)
    for _ in range(50):
        space = _random_space(rng)
        poset, projection = quotient_poset(space)
        opens = set(topology_of(space))
        assert set(projection.values()) == set(poset.elements)
        for cls in poset.elements:
            preimage = frozenset(
                pt for pt in space.points if projection[pt] in poset.min_open(cls)
            )
            assert preimage in opens


def test_fingerprint_distinctness():
    rng = random.Random(11)
    for _ in range(50):
        space = _random_space(rng)
        poset, projection = quotient_poset(space)
        reps = {}
        for pt in space.points:
            reps.setdefault(projection[pt], set()).add(space.fingerprint(pt))
        fps = [next(iter(v)) for v in reps.values()]
        assert all(len(v) == 1 for v in reps.values())
        assert len(set(fps)) == len(fps)


def test_quotient_idempotent(p4s1, p6s2, vee):
    for p in (vee, p4s1, p6s2):
        space = CoveredSpace(
            list(p.elements),
            [(f"O_{x}", sorted(p.min_open(x))) for x in p.elements],
        )
        again, projection = quotient_poset(space)
        assert again.is_isomorphic(p)
        assert len(set(projection.values())) == len(p)


def test_parse_covered_space():
    space = parse_covered_space(
        "# sample\npoints: p r\nopen O1: p\nopen O2: p r\n"
    )
    assert space.points == ("p", "r")
    assert space.cover[0] == ("O1", frozenset({"p"}))
    with pytest.raises(ParseError):
        parse_covered_space("open O1: p\n")
    with pytest.raises(ParseError):
        parse_covered_space("points: p\nnonsense here\n")

from __future__ import annotations

import itertools

import pytest

from posetaf.catalog import all_posets
from posetaf.errors import CycleError, TooLarge, UnknownLabel
from posetaf.poset import Poset, parse_poset


def brute_maximal_chains(p: Poset) -> set[tuple[str, ...]]:
    """Independent oracle: exhaustive cover-path enumeration."""
    chains = set()

    def walk(chain):
        tops = [b for a, b in p.covers if a == chain[-1]]
        if not tops:
            chains.add(tuple(chain))
        for b in tops:
            walk(chain + [b])

    for x in p.minimal_points():
        walk([x])
    return chains


def test_from_covers_circle_relations(p4s1):
    # the four strict relations plus reflexivity, nothing else
    strict = {(a, b) for a in p4s1.elements for b in p4s1.elements
              if a != b and p4s1.leq(a, b)}
    assert strict == {("x1", "x2"), ("x1", "x4"), ("x3", "x2"), ("x3", "x4")}
    assert all(p4s1.leq(x, x) for x in p4s1.elements)


def test_from_covers_singleton():
    p = Poset.from_covers(["a"], [])
    assert p.leq("a", "a")
    assert p.covers == frozenset()


def test_from_covers_drops_implied_pair():
    p = Poset.from_covers(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert p.covers == {("a", "b"), ("b", "c")}


def test_from_covers_errors():
    with pytest.raises(CycleError) as exc:
        Poset.from_covers(["a", "b"], [("a", "b"), ("b", "a")])
    assert "cycle" in str(exc.value)
    with pytest.raises(UnknownLabel):
        Poset.from_covers(["a"], [("a", "zz")])
    with pytest.raises(UnknownLabel):
        Poset.from_covers(["a", "a"], [])


def test_min_open(p4s1, vee):
    assert p4s1.min_open("x2") == {"x1", "x2", "x3"}
    assert p4s1.min_open("x1") == {"x1"}
    single = Poset.from_covers(["a"], [])
    assert single.min_open("a") == {"a"}
    with pytest.raises(UnknownLabel):
        vee.min_open("nope")


def test_closure(p4s1, p6s2):
    assert p4s1.closure(["x1"]) == {"x1", "x2", "x4"}
    assert p6s2.closure(["x4"]) == {"x4", "x5", "x6"}
    assert p4s1.closure([]) == frozenset()


def test_all_closed_sets_vee(vee):
    family = [set(s) for s in vee.all_closed_sets()]
    assert family == [set(), {"p1"}, {"p2"}, {"p1", "p2"}, {"p1", "p2", "q"}]


def test_all_closed_sets_antichain():
    p = Poset.from_covers(["a", "b", "c"], [])
    family = set(p.all_closed_sets())
    # discrete topology: every subset is closed
    assert family == {
        frozenset(s)
        for k in range(4)
        for s in itertools.combinations("abc", k)
    }


def test_all_closed_sets_chain():
    p = Poset.from_covers(["a", "b"], [("a", "b")])
    # derived by direct enumeration of up-sets
    assert [set(s) for s in p.all_closed_sets()] == [set(), {"b"}, {"a", "b"}]


def test_all_closed_sets_bound(vee):
    with pytest.raises(TooLarge):
        vee.all_closed_sets(max_elements=2)


def test_extrema(p4s1, vee):
    assert p4s1.maximal_points() == {"x2", "x4"}
    assert p4s1.minimal_points() == {"x1", "x3"}
    assert vee.maximal_points() == {"p1", "p2"}
    assert vee.minimal_points() == {"q"}
    single = Poset.from_covers(["a"], [])
    assert single.maximal_points() == single.minimal_points() == {"a"}
    assert vee.covers_of("q") == {"p1", "p2"}
    assert vee.covers_of("p1") == frozenset()


def test_maximal_chains(vee, p4s1):
    assert vee.maximal_chains() == [("q", "p1"), ("q", "p2")]
    assert p4s1.maximal_chains() == [
        ("x1", "x2"), ("x1", "x4"), ("x3", "x2"), ("x3", "x4"),
    ]
    single = Poset.from_covers(["a"], [])
    assert single.maximal_chains() == [("a",)]


def test_maximal_chains_against_oracle(p6s2, vee):
    for p in (p6s2, vee):
        assert set(p.maximal_chains()) == brute_maximal_chains(p)


def test_automorphisms_vee(vee):
    autos = vee.automorphisms()
    assert len(autos) == 2
    assert {"p1": "p1", "q": "q", "p2": "p2"} in autos
    assert {"p1": "p2", "q": "q", "p2": "p1"} in autos


def test_automorphisms_chain_rigid():
    p = Poset.from_covers(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert p.automorphisms() == [{"a": "a", "b": "b", "c": "c"}]


def test_automorphisms_antichain():
    p = Poset.from_covers(["a", "b", "c"], [])
    assert len(p.automorphisms()) == 6


def test_automorphisms_group_laws(p4s1):
    autos = p4s1.automorphisms()
    assert {x: x for x in p4s1.elements} in autos
    as_tuples = {tuple(f[x] for x in p4s1.elements) for f in autos}
    for f, g in itertools.product(autos, repeat=2):
        comp = tuple(f[g[x]] for x in p4s1.elements)
        assert comp in as_tuples
    for f in autos:
        inv = {v: k for k, v in f.items()}
        assert tuple(inv[x] for x in p4s1.elements) in as_tuples


def test_automorphisms_bound(p4s1):
    with pytest.raises(TooLarge):
        p4s1.automorphisms(max_elements=3)


def test_automorphisms_against_bruteforce(vee, p4s1):
    for p in (vee, p4s1):
        expected = []
        for perm in itertools.permutations(p.elements):
            f = dict(zip(p.elements, perm))
            if all(
                p.leq(a, b) == p.leq(f[a], f[b])
                for a in p.elements
                for b in p.elements
            ):
                expected.append(f)
        got = p.automorphisms()
        assert len(got) == len(expected)
        assert all(f in got for f in expected)


def test_hasse_dot(vee, p6s2):
    single = Poset.from_covers(["a"], [])
    dot = single.hasse_dot()
    assert dot.count("->") == 0 and '"a";' in dot
    dot = vee.hasse_dot()
    assert dot.count("->") == 2
    dot = p6s2.hasse_dot()
    assert dot.count("->") == 8


def test_order_iff_min_open_inclusion_exhaustive():
    for n in range(1, 6):
        for p in all_posets(n):
            for x in p.elements:
                for y in p.elements:
                    assert p.leq(x, y) == (p.min_open(x) <= p.min_open(y))


def test_t0_separation():
    for p in all_posets(5):
        opens = [p.min_open(x) for x in p.elements]
        assert len(set(opens)) == len(opens)


def test_closed_family_is_a_lattice(vee, p4s1, p6s2):
    for p in (vee, p4s1, p6s2):
        family = p.all_closed_sets()
        assert family.closed_under_union_intersection()
        assert frozenset() in family
        assert frozenset(p.elements) in family


def test_cover_roundtrip():
    for n in range(1, 6):
        for p in all_posets(n):
            assert Poset.from_covers(p.elements, p.covers) == p


def test_empty_poset():
    p = Poset.from_covers([], [])
    assert len(p) == 0
    assert list(p.all_closed_sets()) == [frozenset()]
    assert p.maximal_chains() == []
    assert p.automorphisms() == [{}]


def test_text_roundtrip(vee, p4s1, p6s2):
    for p in (vee, p4s1, p6s2):
        assert parse_poset(p.to_text()) == p


def test_parse_comments_and_errors():
    p = parse_poset("# a comment\nelements: a b\na < b  # trailing\n")
    assert p.leq("a", "b")
    from posetaf.errors import ParseError

    with pytest.raises(ParseError):
        parse_poset("a < b\n")
    with pytest.raises(ParseError):
        parse_poset("elements: a b\na <\n")


def test_subposet(p6s2):
    up = p6s2.subposet(p6s2.closure(["x2"]))
    assert set(up.elements) == {"x2", "x5", "x6"}
    assert up.covers == {("x2", "x5"), ("x2", "x6")}


def test_isomorphism(vee):
    q = Poset.from_covers(["a", "b", "c"], [("c", "a"), ("c", "b")])
    assert vee.is_isomorphic(q)
    iso = vee.isomorphism_to(q)
    assert iso is not None and iso["q"] == "c"
    chain = Poset.from_covers(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert not vee.is_isomorphic(chain)

from __future__ import annotations

import pytest

from posetaf.bratteli import prim_poset
from posetaf.catalog import all_posets
from posetaf.errors import EmptyPosetError, IndexOutOfRange
from posetaf.exprs import (
    Compacts,
    IdentityTensorCompacts,
    ScalarIdentity,
    render_algebra,
)
from posetaf.poset import Poset
from posetaf.poset_to_af import (
    build_diagram,
    build_report,
    closed_set_schedule,
    level_partition,
    limit_algebra_expr,
    stabilization_level,
    stable_point_order,
)


def test_schedule_vee(vee):
    assert [set(k) for k in closed_set_schedule(vee)] == [
        {"p1", "p2", "q"},
        {"p1"},
        {"p2"},
        {"p1", "p2"},
    ]


def test_schedule_singleton_and_chain():
    single = Poset.from_covers(["a"], [])
    assert closed_set_schedule(single) == [frozenset({"a"})]
    chain = Poset.from_covers(["a", "b"], [("a", "b")])
    assert [set(k) for k in closed_set_schedule(chain)] == [{"a", "b"}, {"b"}]


def test_schedule_empty_poset():
    with pytest.raises(EmptyPosetError):
        closed_set_schedule(Poset.from_covers([], []))


def test_level_partition_vee(vee):
    lp2 = level_partition(vee, 2)
    assert [set(y) for y in lp2.Y] == [{"p1"}, {"p2", "q"}]
    assert [set(f) for f in lp2.F] == [{"p1"}, {"p1", "p2", "q"}]
    lp3 = level_partition(vee, 3)
    assert [set(y) for y in lp3.Y] == [{"p1"}, {"q"}, {"p2"}]
    assert [set(f) for f in lp3.F] == [{"p1"}, {"p1", "p2", "q"}, {"p2"}]
    # the union/intersection closure gains {p1, p2} at level 3
    assert frozenset({"p1", "p2"}) in set(lp3.Kn_prime)
    assert len(lp3.Kn_prime) == 4


def test_level_partition_level_one(vee, p6s2):
    for p in (vee, p6s2):
        lp = level_partition(p, 1)
        assert lp.Y == (frozenset(p.elements),)
        assert lp.F == (frozenset(p.elements),)


def test_level_partition_bounds(vee):
    with pytest.raises(IndexOutOfRange):
        level_partition(vee, 0)
    with pytest.raises(IndexOutOfRange):
        level_partition(vee, 9)


def test_partition_invariants(p6s2):
    schedule = closed_set_schedule(p6s2)
    for n in range(1, len(schedule) + 1):
        lp = level_partition(p6s2, n, schedule)
        # Y partitions the space
        assert sorted(x for y in lp.Y for x in y) == sorted(p6s2.elements)
        assert all(y for y in lp.Y)
        for y, f in zip(lp.Y, lp.F):
            assert y <= f
            assert f in set(lp.Kn_prime)
            # inclusion-minimal member containing the atom
            for candidate in lp.Kn_prime:
                if y <= candidate:
                    assert f <= candidate


def test_partition_refinement(p6s2):
    schedule = closed_set_schedule(p6s2)
    prev = level_partition(p6s2, 1, schedule)
    for n in range(2, len(schedule) + 1):
        lp = level_partition(p6s2, n, schedule)
        for atom in lp.Y:
            assert any(atom <= old for old in prev.Y)
        prev = lp


def test_stabilization_levels(vee, p4s1, p6s2):
    assert stabilization_level(vee) == 3
    assert stabilization_level(p4s1) == 4
    assert stabilization_level(p6s2) == 6


def test_stabilization_antichain():
    for k in (2, 3, 4, 5):
        p = Poset.from_covers([f"a{i}" for i in range(k)], [])
        assert stabilization_level(p) == k


def test_build_vee(vee):
    d = build_diagram(vee)
    assert d.levels == ((1,), (1, 1), (1, 2, 1))
    assert d.tail is not None and d.tail.start == 3 and d.tail.period == 1
    assert d.edge_matrix(3) == ((1, 0, 0), (1, 1, 1), (0, 0, 1))
    assert [d.dims(n) for n in range(3, 7)] == [
        (1, 2, 1), (1, 4, 1), (1, 6, 1), (1, 8, 1),
    ]
    assert d.validate().ok
    assert stable_point_order(vee) == ("p1", "q", "p2")


def test_build_circle(p4s1):
    r = build_report(p4s1)
    assert r.n0 == 4 and r.stable_start == 4
    stable = r.partitions[3]
    after = r.partitions[4]
    assert len(stable.Y) == 4
    table = {next(iter(y)): f for y, f in zip(stable.Y, after.F)}
    assert table == {
        "x1": frozenset({"x1", "x2", "x4"}),
        "x2": frozenset({"x2"}),
        "x3": frozenset({"x2", "x3", "x4"}),
        "x4": frozenset({"x4"}),
    }
    # stable columns x1..x4: x2 feeds x1, x2, x3; x4 feeds x1, x3, x4
    assert r.diagram.edge_matrix(4) == (
        (1, 1, 0, 1),
        (0, 1, 0, 0),
        (0, 1, 1, 1),
        (0, 0, 0, 1),
    )
    assert r.diagram.validate().ok


def test_build_sphere(p6s2):
    r = build_report(p6s2)
    assert r.n0 == 6 and r.stable_start == 6
    stable = r.partitions[5]
    after = r.partitions[6]
    assert len(stable.Y) == 6
    table = {next(iter(y)): f for y, f in zip(stable.Y, after.F)}
    assert table == {
        "x1": frozenset({"x1", "x2", "x4", "x5", "x6"}),
        "x2": frozenset({"x2", "x5", "x6"}),
        "x3": frozenset({"x2", "x3", "x4", "x5", "x6"}),
        "x4": frozenset({"x4", "x5", "x6"}),
        "x5": frozenset({"x5"}),
        "x6": frozenset({"x6"}),
    }
    assert r.diagram.validate().ok


def test_build_singleton():
    d = build_diagram(Poset.from_covers(["a"], []))
    assert d.levels == ((1,),)
    assert [d.dims(n) for n in (1, 2, 5)] == [(1,), (1,), (1,)]


def test_edge_totality_and_stability(p6s2):
    r = build_report(p6s2)
    for n in range(1, r.stable_start + 1):
        m = r.diagram.edge_matrix(n)
        for j in range(r.diagram.width(n)):
            assert any(m[k][j] > 0 for k in range(len(m)))
    # the partition repeats at and beyond the stable level
    schedule = list(r.schedule)
    s = r.stable_start
    for n in range(s, len(schedule) + 1):
        assert level_partition(p6s2, n, schedule).Y == r.partitions[s - 1].Y


def test_roundtrip_small():
    for n in range(1, 5):
        for p in all_posets(n):
            assert prim_poset(build_diagram(p)).is_isomorphic(p)


def test_limit_algebra_vee(vee):
    a = limit_algebra_expr(vee)
    assert render_algebra(a) == "C.I(H1) (+) C.I(H2) (+) K(H1 (+) H2)"


def test_limit_algebra_circle(p4s1):
    a = limit_algebra_expr(p4s1)
    # two fused identity blocks and two compact blocks
    assert render_algebra(a) == (
        "C.I(H1 (+) H3) (+) C.I(H2 (+) H4) (+) K(H1 (+) H2) (+) K(H3 (+) H4)"
    )


def test_limit_algebra_sphere(p6s2):
    a = limit_algebra_expr(p6s2)
    kinds = [type(t).__name__ for t in a.terms]
    assert kinds.count("ScalarIdentity") == 2
    assert kinds.count("IdentityTensorCompacts") == 2
    assert kinds.count("Compacts") == 2
    scalars = [t for t in a.terms if isinstance(t, ScalarIdentity)]
    compacts = [t for t in a.terms if isinstance(t, Compacts)]
    mixed = [t for t in a.terms if isinstance(t, IdentityTensorCompacts)]
    # each identity block spans the four chains through one top point,
    # each compact block the four chains of one bottom point
    assert {render_algebra(type(a)([t])) for t in scalars} == {
        "C.I(H1 (+) H3 (+) H5 (+) H7)",
        "C.I(H2 (+) H4 (+) H6 (+) H8)",
    }
    assert {render_algebra(type(a)([t])) for t in compacts} == {
        "K(H1 (+) H2 (+) H3 (+) H4)",
        "K(H5 (+) H6 (+) H7 (+) H8)",
    }
    assert len(mixed) == 2

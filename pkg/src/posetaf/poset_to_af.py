"""From a finite poset to the Bratteli diagram of an algebra with that Prim.

The construction schedules the nonempty closed sets of the poset as
K1, K2, ..., with K1 the whole space and the point closures first; the
first n sets partition the space into the atoms Y(n,j) of the Boolean
algebra they generate, and F(n,j) is the smallest set of the
union/intersection closure K_n' containing Y(n,j).  Level n of the diagram
has one node per atom; an atom at level n links (multiplicity one) to an
atom at level n+1 whenever it meets that atom's F-set.  Dimensions start at
one and follow the dimension rule.

Scheduling the point closures immediately after K1 makes the partition
separate every point, and the F-sets reach the point closures, as early as
possible; the diagram then repeats from the stabilization level onward and
is stored with a period-one tail.

Atoms are listed by their earliest member in the declared element order, so
the printed tables and the diagram columns follow the input layout.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bratteli import BrattelliDiagram, Tail
from .errors import EmptyPosetError, IndexOutOfRange
from .exprs import AlgebraExpr
from .poset import Poset, SubsetFamily, subset_sort_key


def closed_set_schedule(p: Poset, max_elements: int | None = None) -> list[frozenset[str]]:
    """K1 = the whole space, then the other point closures, then the rest;
    each group in canonical (cardinality, lex) order, empty set excluded."""
    if not len(p):
        raise EmptyPosetError("cannot schedule closed sets of the empty poset")
    kw = {} if max_elements is None else {"max_elements": max_elements}
    everything = frozenset(p.elements)
    all_closed = [s for s in p.all_closed_sets(**kw) if s]
    closures = sorted(
        {p.closure([x]) for x in p.elements} - {everything}, key=subset_sort_key
    )
    rest = sorted(
        set(all_closed) - set(closures) - {everything}, key=subset_sort_key
    )
    return [everything] + closures + rest


def union_intersection_closure(
    p: Poset, sets: list[frozenset[str]]
) -> SubsetFamily:
    """Smallest family containing the sets and closed under union and
    intersection; the empty set is left out (closed sets here are nonempty)."""
    family: set[frozenset[str]] = set(sets)
    frontier = list(family)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(family):
                for c in (a | b, a & b):
                    if c and c not in family:
                        family.add(c)
                        fresh.append(c)
        frontier = fresh
    return SubsetFamily(p, sorted(family, key=subset_sort_key))


@dataclass(frozen=True)
class LevelPartition:
    n: int
    Kn: SubsetFamily
    Kn_prime: SubsetFamily
    Y: tuple[frozenset[str], ...]
    F: tuple[frozenset[str], ...]


def level_partition(p: Poset, n: int, schedule: list[frozenset[str]] | None = None) -> LevelPartition:
    """Atoms of the Boolean algebra of K1..Kn, each with its smallest
    containing member of K_n'."""
    if schedule is None:
        schedule = closed_set_schedule(p)
    if not 1 <= n <= len(schedule):
        raise IndexOutOfRange(f"level {n} outside 1..{len(schedule)}")
    prefix = schedule[:n]
    fingerprints: dict[tuple[bool, ...], list[str]] = {}
    for x in p.elements:
        fp = tuple(x in k for k in prefix)
        fingerprints.setdefault(fp, []).append(x)
    # members arrive in declared order, so each atom's first member is its
    # earliest one; order atoms by it
    atoms = sorted(fingerprints.values(), key=lambda ms: p.index(ms[0]))
    y = tuple(frozenset(ms) for ms in atoms)
    prime = union_intersection_closure(p, prefix)
    f = []
    for atom in y:
        smallest = None
        for candidate in prime:
            if atom <= candidate and (smallest is None or candidate < smallest):
                smallest = candidate
        assert smallest is not None  # K1 contains everything
        f.append(smallest)
    return LevelPartition(n, SubsetFamily(p, prefix), prime, y, tuple(f))


def stabilization_level(p: Poset, schedule: list[frozenset[str]] | None = None) -> int:
    """Smallest n whose partition separates every point."""
    if schedule is None:
        schedule = closed_set_schedule(p)
    for n in range(1, len(schedule) + 1):
        lp = level_partition(p, n, schedule)
        if all(len(a) == 1 for a in lp.Y):
            return n
    raise AssertionError("the full schedule always separates points")


@dataclass(frozen=True)
class BuildReport:
    poset: Poset
    schedule: tuple[frozenset[str], ...]
    n0: int
    stable_start: int
    partitions: tuple[LevelPartition, ...]  # levels 1 .. stable_start + 1
    diagram: BrattelliDiagram


def _edge_matrix(lower: LevelPartition, upper: LevelPartition) -> list[list[int]]:
    return [
        [1 if lower.Y[a] & upper.F[b] else 0 for a in range(len(lower.Y))]
        for b in range(len(upper.Y))
    ]


def build_report(p: Poset) -> BuildReport:
    if not len(p):
        raise EmptyPosetError("cannot build a diagram over the empty poset")
    schedule = closed_set_schedule(p)
    n0 = stabilization_level(p, schedule)
    closures = {p.closure([x]) for x in p.elements}
    # the diagram repeats once the partition is discrete and every F-set has
    # shrunk to a point closure; capping at the schedule length is safe since
    # the full family contains every closure
    stable = n0
    while True:
        nxt = level_partition(p, min(stable + 1, len(schedule)), schedule)
        if all(f in closures for f in nxt.F):
            break
        stable += 1
    partitions = [
        level_partition(p, min(n, len(schedule)), schedule)
        for n in range(1, stable + 2)
    ]
    levels: list[tuple[int, ...]] = [(1,) * len(partitions[0].Y)]
    matrices = []
    for n in range(1, stable + 1):
        m = _edge_matrix(partitions[n - 1], partitions[n])
        matrices.append(m)
        if n < stable:
            prev = levels[-1]
            levels.append(
                tuple(sum(row[j] * prev[j] for j in range(len(prev))) for row in m)
            )
    diagram = BrattelliDiagram(
        levels, matrices, tail=Tail(start=stable, period=1), unital=True
    )
    return BuildReport(
        p, tuple(schedule), n0, stable, tuple(partitions), diagram
    )


def build_diagram(p: Poset) -> BrattelliDiagram:
    """The eventually periodic diagram whose Prim is the given poset."""
    return build_report(p).diagram


def stable_point_order(p: Poset) -> tuple[str, ...]:
    """Poset point carried by each stable-level node, in node order."""
    report = build_report(p)
    stable = report.partitions[report.stable_start - 1]
    return tuple(next(iter(a)) for a in stable.Y)


def limit_algebra_expr(p: Poset) -> AlgebraExpr:
    """Closed form of the limit algebra, via the classification construction
    with the canonical defector (one on maximal points, zero elsewhere);
    identity parts over a common compact factor are fused into single blocks.
    """
    from .behncke_leptin import canonical_defector, construct

    c = construct(p, canonical_defector(p))
    return c.fused_algebra

"""Bratteli diagrams: validity, ideals, primitive ideals, Prim reconstruction.

A diagram is a leveled multigraph: level n carries a vector of matrix-block
dimensions, and the transition to level n+1 is a nonnegative integer matrix
N with N[k][j] = multiplicity of the embedding of block j into block k.
For a unital diagram the dimension rule sum_j N[k][j] d_j = d_k holds at
every stored transition.

Infinite diagrams are stored as an eventually periodic structure: the
stored levels end with one full periodic block (levels ``tail.start ..
tail.start + tail.period - 1``) and the last stored edge matrix wraps from
the block's final level back to its first.  Node counts and edge matrices
repeat forever; dimensions keep growing and are recomputed on demand from
the dimension rule.

Ideal marks follow the two closure conditions: (i) every successor of a
marked node is marked, and (ii) a node whose successors are all marked is
itself marked.  A proper ideal is primitive when, level by level, all
unmarked nodes can be funneled into one unmarked node further down; on an
eventually periodic diagram this is decided by reachability over one
period, on a finite truncation it is decided literally (a truncation
verdict).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NoTail, NotAnIdeal, ParseError, ShapeMismatch, TooLarge
from .poset import Poset

MAX_IDEAL_NODES = 16  # bound on period node count for ideal enumeration

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Tail:
    start: int
    period: int


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


class BrattelliDiagram:
    __slots__ = ("levels", "edges", "tail", "unital")

    def __init__(
        self,
        levels: Sequence[Sequence[int]],
        edges: Sequence[Sequence[Sequence[int]]],
        tail: Tail | None = None,
        unital: bool = True,
    ):
        self.levels: tuple[tuple[int, ...], ...] = tuple(tuple(l) for l in levels)
        self.edges: tuple[Matrix, ...] = tuple(
            tuple(tuple(row) for row in m) for m in edges
        )
        self.tail = tail
        self.unital = unital
        if not self.levels:
            raise ShapeMismatch("a diagram needs at least one level")
        expected = len(self.levels) if tail is not None else len(self.levels) - 1
        if len(self.edges) != expected:
            raise ShapeMismatch(
                f"expected {expected} edge matrices for {len(self.levels)} levels, "
                f"got {len(self.edges)}"
            )
        if tail is not None:
            if tail.period < 1 or tail.start < 1:
                raise ShapeMismatch("tail indices must be positive")
            if tail.start + tail.period - 1 != len(self.levels):
                raise ShapeMismatch(
                    "stored levels must end with exactly one periodic block"
                )

    # -- geometry --------------------------------------------------------

    @property
    def stored(self) -> int:
        return len(self.levels)

    def _pos(self, n: int) -> int:
        """Stored level index (1-based) representing level n."""
        if n < 1:
            raise ShapeMismatch(f"level {n} out of range")
        if n <= self.stored:
            return n
        if self.tail is None:
            raise ShapeMismatch(f"level {n} beyond a finite diagram")
        return self.tail.start + (n - self.tail.start) % self.tail.period

    def width(self, n: int) -> int:
        return len(self.levels[self._pos(n) - 1])

    def edge_matrix(self, n: int) -> Matrix:
        """Transition matrix from level n to level n+1."""
        pos = self._pos(n)
        if pos > len(self.edges):
            raise ShapeMismatch(f"no edge matrix from level {n}")
        return self.edges[pos - 1]

    def dims(self, n: int) -> tuple[int, ...]:
        pos = self._pos(n)
        if n <= self.stored:
            return self.levels[pos - 1]
        d = self.levels[self.stored - 1]
        for k in range(self.stored, n):
            m = self.edge_matrix(k)
            d = tuple(sum(row[j] * d[j] for j in range(len(d))) for row in m)
        return d

    def successors(self, n: int, j: int) -> list[int]:
        m = self.edge_matrix(n)
        return [k for k in range(len(m)) if m[k][j] > 0]

    # -- validation --------------------------------------------------------

    def validate(self, unital: bool | None = None) -> ValidationReport:
        """Shape and dimension-rule checks; reports, never raises."""
        unital = self.unital if unital is None else unital
        problems: list[str] = []
        warnings: list[str] = []
        for i, m in enumerate(self.edges):
            n = i + 1
            target = n + 1 if n < self.stored else (self.tail.start if self.tail else None)
            if target is None:
                continue
            if len(m) != self.width(target):
                problems.append(
                    f"edge matrix {n}->{n + 1}: {len(m)} rows, "
                    f"target level has {self.width(target)} nodes"
                )
                continue
            for row in m:
                if len(row) != len(self.levels[n - 1]):
                    problems.append(
                        f"edge matrix {n}->{n + 1}: row width {len(row)}, "
                        f"source level has {len(self.levels[n - 1])} nodes"
                    )
                    break
                if any(v < 0 for v in row):
                    problems.append(f"edge matrix {n}->{n + 1}: negative multiplicity")
            if n + 1 <= self.stored and len(m) == self.width(n + 1):
                src = self.levels[n - 1]
                tgt = self.levels[n]
                for k, row in enumerate(m):
                    if len(row) != len(src):
                        continue
                    total = sum(row[j] * src[j] for j in range(len(src)))
                    if total != tgt[k]:
                        msg = (
                            f"dimension rule fails at level {n + 1}, block {k}: "
                            f"{total} != {tgt[k]}"
                        )
                        (problems if unital else warnings).append(msg)
        return ValidationReport(tuple(problems), tuple(warnings))

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        def ints(xs: Iterable[int]) -> str:
            return "[" + ", ".join(str(v) for v in xs) + "]"

        lines = ["{"]
        lines.append(
            '  "levels": [\n    ' + ",\n    ".join(ints(l) for l in self.levels) + "\n  ],"
        )
        matrices = [
            "[" + ", ".join(ints(row) for row in m) + "]" for m in self.edges
        ]
        body = '  "edges": [\n    ' + ",\n    ".join(matrices) + "\n  ]"
        if self.tail is not None:
            body += f',\n  "tail": {{"start": {self.tail.start}, "period": {self.tail.period}}}'
        if not self.unital:
            body += ',\n  "unital": false'
        lines.append(body)
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BrattelliDiagram":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad diagram JSON: {e}") from None
        if not isinstance(doc, dict) or "levels" not in doc or "edges" not in doc:
            raise ParseError("diagram JSON needs 'levels' and 'edges'")
        tail = None
        if doc.get("tail") is not None:
            tail = Tail(int(doc["tail"]["start"]), int(doc["tail"]["period"]))
        return cls(doc["levels"], doc["edges"], tail, doc.get("unital", True))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BrattelliDiagram)
            and self.levels == other.levels
            and self.edges == other.edges
            and self.tail == other.tail
            and self.unital == other.unital
        )

    def __hash__(self) -> int:
        return hash((self.levels, self.edges, self.tail, self.unital))

    def __repr__(self) -> str:
        t = f", tail={self.tail}" if self.tail else ""
        return f"BrattelliDiagram(levels={list(self.levels)}{t})"


@dataclass(frozen=True)
class IdealMark:
    """Marked node subsets, one per stored level of the owning diagram.

    For a tailed diagram the subset at each periodic position is understood
    to repeat forever (period invariance).
    """

    levels: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]]) -> "IdealMark":
        return cls(tuple(frozenset(s) for s in sets))

    def marked_count(self) -> int:
        return sum(len(s) for s in self.levels)

    def union(self, other: "IdealMark") -> "IdealMark":
        return IdealMark(tuple(a | b for a, b in zip(self.levels, other.levels)))

    def intersection(self, other: "IdealMark") -> "IdealMark":
        return IdealMark(tuple(a & b for a, b in zip(self.levels, other.levels)))

    def includes(self, other: "IdealMark") -> bool:
        return all(b <= a for a, b in zip(self.levels, other.levels))


def _check_mark(d: BrattelliDiagram, mark: IdealMark) -> None:
    if len(mark.levels) != d.stored:
        raise ShapeMismatch(
            f"mark has {len(mark.levels)} levels, diagram stores {d.stored}"
        )
    for n, s in enumerate(mark.levels, start=1):
        if any(j < 0 or j >= d.width(n) for j in s):
            raise ShapeMismatch(f"mark at level {n} references a missing node")


def _transitions(d: BrattelliDiagram) -> list[tuple[int, int, Matrix]]:
    """(source stored level, target stored level, matrix) for every stored
    transition, including the periodic wrap."""
    out = []
    for i, m in enumerate(d.edges):
        n = i + 1
        if n + 1 <= d.stored:
            out.append((n, n + 1, m))
        else:
            assert d.tail is not None
            out.append((n, d.tail.start, m))
    return out


def is_ideal(d: BrattelliDiagram, mark: IdealMark) -> bool:
    """Conditions (i) and (ii) for the mark, over all stored transitions."""
    _check_mark(d, mark)
    for src, tgt, m in _transitions(d):
        marked_src = mark.levels[src - 1]
        marked_tgt = mark.levels[tgt - 1]
        for j in range(d.width(src)):
            succ = [k for k in range(len(m)) if m[k][j] > 0]
            if j in marked_src:
                if any(k not in marked_tgt for k in succ):
                    return False
            elif succ and all(k in marked_tgt for k in succ):
                return False
    return True


def is_proper(d: BrattelliDiagram, mark: IdealMark) -> bool:
    return any(len(mark.levels[n - 1]) < d.width(n) for n in range(1, d.stored + 1))


def is_primitive(d: BrattelliDiagram, mark: IdealMark) -> bool:
    """Condition (iii): all unmarked nodes at a level reach a common
    unmarked node further down.

    On a tailed diagram this is evaluated by reachability closure over one
    period; on a finite diagram the condition is checked literally on the
    available levels (the verdict of the truncation).
    """
    if not is_ideal(d, mark):
        raise NotAnIdeal("mark fails conditions (i)/(ii)")
    if not is_proper(d, mark):
        raise NotAnIdeal("the full mark is the improper ideal")
    if d.tail is not None:
        return _primitive_periodic(d, mark)
    return _primitive_finite(d, mark)


def _primitive_periodic(d: BrattelliDiagram, mark: IdealMark) -> bool:
    assert d.tail is not None
    start = d.tail.start
    nodes = [
        (lvl, j)
        for lvl in range(start, d.stored + 1)
        for j in range(d.width(lvl))
        if j not in mark.levels[lvl - 1]
    ]
    # unmarked nodes always have an unmarked successor (by condition (ii)),
    # so prefix levels funnel into the periodic part and can be ignored
    adj: dict[tuple[int, int], set[tuple[int, int]]] = {v: set() for v in nodes}
    for src, tgt, m in _transitions(d):
        if src < start:
            continue
        for j in range(d.width(src)):
            if j in mark.levels[src - 1]:
                continue
            for k in range(len(m)):
                if m[k][j] > 0 and k not in mark.levels[tgt - 1]:
                    adj[(src, j)].add((tgt, k))
    reach: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for v in nodes:
        seen: set[tuple[int, int]] = set()
        frontier = list(adj[v])
        while frontier:
            u = frontier.pop()
            if u in seen:
                continue
            seen.add(u)
            frontier.extend(adj[u])
        reach[v] = seen
    if not nodes:
        return False
    common = set.intersection(*(reach[v] for v in nodes))
    return bool(common)


def _primitive_finite(d: BrattelliDiagram, mark: IdealMark) -> bool:
    for n in range(1, d.stored):
        sources = [j for j in range(d.width(n)) if j not in mark.levels[n - 1]]
        if not sources:
            continue
        reach = {j: {j} for j in sources}
        found = False
        for m in range(n, d.stored):
            matrix = d.edges[m - 1]
            nxt = {}
            for j in sources:
                cur = reach[j]
                nxt[j] = {
                    k
                    for k in range(len(matrix))
                    if k not in mark.levels[m]
                    and any(matrix[k][i] > 0 for i in cur)
                }
            reach = nxt
            common = set.intersection(*(reach[j] for j in sources)) if sources else set()
            if common:
                found = True
                break
        if not found:
            return False
    return True


def enumerate_ideals(
    d: BrattelliDiagram, max_period_nodes: int = MAX_IDEAL_NODES
) -> list[IdealMark]:
    """All period-invariant marks satisfying (i) and (ii), in canonical
    order (marked period-node count, then lexicographically)."""
    if d.tail is None:
        raise NoTail("ideal enumeration needs an eventually periodic diagram")
    start = d.tail.start
    period_levels = list(range(start, d.stored + 1))
    positions = [(lvl, j) for lvl in period_levels for j in range(d.width(lvl))]
    if len(positions) > max_period_nodes:
        raise TooLarge(
            f"{len(positions)} period nodes exceed bound {max_period_nodes}"
        )
    marks = []
    for bits in range(1 << len(positions)):
        chosen = {positions[i] for i in range(len(positions)) if bits >> i & 1}
        per_level = {lvl: frozenset(j for (l, j) in chosen if l == lvl) for lvl in period_levels}
        mark = _complete_mark(d, per_level)
        if is_ideal(d, mark):
            marks.append(mark)
    marks.sort(
        key=lambda m: (
            sum(len(m.levels[lvl - 1]) for lvl in period_levels),
            tuple(tuple(sorted(m.levels[lvl - 1])) for lvl in period_levels),
        )
    )
    return marks


def _complete_mark(
    d: BrattelliDiagram, per_level: dict[int, frozenset[int]]
) -> IdealMark:
    """Extend a periodic mark backward through the prefix via condition (ii)."""
    assert d.tail is not None
    start = d.tail.start
    levels: list[frozenset[int]] = [frozenset()] * d.stored
    for lvl, s in per_level.items():
        levels[lvl - 1] = s
    for n in range(start - 1, 0, -1):
        m = d.edges[n - 1]
        above = levels[n]
        marked = frozenset(
            j
            for j in range(d.width(n))
            if all(k in above for k in range(len(m)) if m[k][j] > 0)
        )
        levels[n - 1] = marked
    return IdealMark(tuple(levels))


def join_marks(d: BrattelliDiagram, a: IdealMark, b: IdealMark) -> IdealMark:
    """Smallest ideal mark containing both: levelwise union on the periodic
    block, recompleted backward through the prefix.  (A plain levelwise
    union can violate condition (ii) in the prefix -- the join of two ideals
    is the ideal they generate, not their union.)"""
    if d.tail is None:
        raise NoTail("mark joins are defined on eventually periodic diagrams")
    u = a.union(b)
    per_level = {
        lvl: u.levels[lvl - 1] for lvl in range(d.tail.start, d.stored + 1)
    }
    return _complete_mark(d, per_level)


def prim_marks(d: BrattelliDiagram, **kw) -> list[tuple[str, IdealMark]]:
    """Primitive proper marks with canonical labels I0, I1, ... in
    enumeration order."""
    out = []
    for mark in enumerate_ideals(d, **kw):
        if not is_proper(d, mark):
            continue
        if is_primitive(d, mark):
            out.append(mark)
    return [(f"I{i}", m) for i, m in enumerate(out)]


def prim_poset(d: BrattelliDiagram, **kw) -> Poset:
    """Prim of the diagram's algebra: primitive marks ordered by inclusion."""
    labeled = prim_marks(d, **kw)
    names = [name for name, _ in labeled]
    pairs = [
        (a, b)
        for a, ma in labeled
        for b, mb in labeled
        if a != b and mb.includes(ma)
    ]
    return Poset.from_covers(names, pairs)


def is_commutative(d: BrattelliDiagram) -> bool:
    """All blocks one-dimensional and every non-initial node has exactly one
    incoming edge, of multiplicity one."""
    if any(dim != 1 for level in d.levels for dim in level):
        return False
    for _, tgt, m in _transitions(d):
        for k in range(d.width(tgt)):
            if sum(m[k]) != 1:
                return False
    return True


def diagram_dot(d: BrattelliDiagram, truncate_at: int) -> str:
    """DOT rendering of the first levels; parallel edges drawn per
    multiplicity, node labels are block dimensions."""
    if truncate_at < 1:
        raise ShapeMismatch("truncate_at must be at least 1")
    lines = ["digraph bratteli {", "  rankdir=TB;"]
    for n in range(1, truncate_at + 1):
        dims = d.dims(n)
        ranked = " ".join(f"n{n}_{j};" for j in range(len(dims)))
        lines.append(f"  {{ rank=same; {ranked} }}")
        for j, dim in enumerate(dims):
            lines.append(f'  n{n}_{j} [label="{dim}"];')
    for n in range(1, truncate_at):
        m = d.edge_matrix(n)
        for k in range(len(m)):
            for j in range(len(m[k])):
                for _ in range(m[k][j]):
                    lines.append(f"  n{n}_{j} -> n{n + 1}_{k};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cantor_diagram(depth: int) -> BrattelliDiagram:
    """Binary-tree diagram of all-ones blocks, truncated at the given depth;
    the commutative algebra of the Cantor set."""
    if depth < 1:
        raise ShapeMismatch("depth must be at least 1")
    levels = [[1] * (1 << (n - 1)) for n in range(1, depth + 1)]
    edges = []
    for n in range(1, depth):
        rows = []
        for k in range(1 << n):
            row = [0] * (1 << (n - 1))
            row[k // 2] = 1
            rows.append(row)
        edges.append(rows)
    return BrattelliDiagram(levels, edges, tail=None)


def single_column_diagram(levels: int) -> BrattelliDiagram:
    """One dimension-1 node per level: the complex numbers."""
    return BrattelliDiagram(
        [[1]] * levels, [[[1]]] * levels, tail=Tail(start=levels, period=1)
    )


def penrose_diagram(levels: int = 5) -> BrattelliDiagram:
    """Fibonacci dimension pattern with the [[1,1],[1,0]] transition."""
    dims = [[1]]
    a, b = 1, 1
    for _ in range(levels - 1):
        dims.append([a, b])
        a, b = a + b, a
    edges: list = [[[1], [1]]]
    edges += [[[1, 1], [1, 0]] for _ in range(levels - 1)]
    return BrattelliDiagram(dims, edges, tail=Tail(start=levels, period=1))

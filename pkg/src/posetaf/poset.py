"""Finite posets viewed as finite T0 topological spaces.

Conventions used throughout the package:

- the order relation ``leq`` is reflexive; ``x < y`` means ``leq`` and distinct;
- the smallest open set containing ``x`` is its down-set
  ``min_open(x) = {y : y <= x}``;
- closed sets are up-sets, ``closure(S) = {y : exists x in S, x <= y}``;
- ``covers`` is the transitive reduction of the strict order;
- a chain is a cover chain: consecutive entries are cover pairs.

Elements keep their declared order (it fixes display order in derived
tables); all set-valued results are otherwise returned in a canonical order
(cardinality, then lexicographically on sorted member labels).

The relation is stored as one bitmask row per element, so posets are cheap
to copy and safe to share: every operation here is a pure function of an
immutable value.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Iterator, Sequence

from .errors import CycleError, TooLarge, UnknownLabel

MAX_CLOSED_ENUM = 20   # element bound for closed-set enumeration
MAX_AUTOS = 12         # element bound for automorphism search


def subset_sort_key(s: Iterable[str]) -> tuple[int, tuple[str, ...]]:
    """Canonical order for families of label sets: cardinality, then lex."""
    t = tuple(sorted(s))
    return (len(t), t)


def render_subset(s: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(s)) + "}"


class Poset:
    """Immutable finite poset over string labels.

    Construct with :meth:`from_covers`; the raw constructor trusts its input.
    """

    __slots__ = ("elements", "_index", "_up", "_down", "covers")

    def __init__(self, elements: Sequence[str], up_masks: Sequence[int]):
        self.elements: tuple[str, ...] = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise UnknownLabel("duplicate element labels")
        self._up: tuple[int, ...] = tuple(up_masks)
        n = len(self.elements)
        down = [0] * n
        for i in range(n):
            if not self._up[i] >> i & 1:
                raise CycleError(f"relation not reflexive at {self.elements[i]}")
            for j in range(n):
                if self._up[i] >> j & 1:
                    down[j] |= 1 << i
        self._down: tuple[int, ...] = tuple(down)
        for i in range(n):
            for j in range(n):
                if i != j and self._up[i] >> j & 1 and self._up[j] >> i & 1:
                    raise CycleError(
                        f"antisymmetry violated: {self.elements[i]} ~ {self.elements[j]}"
                    )
        self.covers: frozenset[tuple[str, str]] = frozenset(self._cover_pairs())

    # -- construction -------------------------------------------------

    @classmethod
    def from_covers(cls, labels: Sequence[str], cover_pairs: Iterable[tuple[str, str]]) -> "Poset":
        """Build from declared labels and (lower, upper) pairs.

        ``leq`` is the reflexive-transitive closure of the pairs; redundant
        input pairs are dropped by the transitive reduction.  Raises
        :class:`CycleError` (with a witness cycle) or :class:`UnknownLabel`.
        """
        labels = list(labels)
        index = {x: i for i, x in enumerate(labels)}
        if len(index) != len(labels):
            raise UnknownLabel("duplicate element labels")
        n = len(labels)
        succ = [0] * n
        for a, b in cover_pairs:
            if a not in index:
                raise UnknownLabel(a)
            if b not in index:
                raise UnknownLabel(b)
            if a == b:
                raise CycleError(f"self-loop at {a}")
            succ[index[a]] |= 1 << index[b]
        up = _reachability(succ, n)
        for i in range(n):
            for j in range(n):
                if i != j and up[i] >> j & 1 and up[j] >> i & 1:
                    raise CycleError(_cycle_witness(labels, succ, i, j))
        return cls(labels, up)

    def _cover_pairs(self) -> Iterator[tuple[str, str]]:
        n = len(self.elements)
        for i in range(n):
            strict_up = self._up[i] & ~(1 << i)
            for j in range(n):
                if strict_up >> j & 1:
                    # (i, j) is a cover unless some k interpolates
                    between = False
                    for k in range(n):
                        if k != i and k != j and self._up[i] >> k & 1 and self._up[k] >> j & 1:
                            between = True
                            break
                    if not between:
                        yield (self.elements[i], self.elements[j])

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Poset)
            and self.elements == other.elements
            and self._up == other._up
        )

    def __hash__(self) -> int:
        return hash((self.elements, self._up))

    def __repr__(self) -> str:
        return f"Poset({list(self.elements)}, covers={sorted(self.covers)})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def leq(self, x: str, y: str) -> bool:
        return bool(self._up[self.index(x)] >> self.index(y) & 1)

    def mask_to_labels(self, mask: int) -> frozenset[str]:
        return frozenset(x for i, x in enumerate(self.elements) if mask >> i & 1)

    def labels_to_mask(self, labels: Iterable[str]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def up_mask(self, x: str) -> int:
        return self._up[self.index(x)]

    def down_mask(self, x: str) -> int:
        return self._down[self.index(x)]

    # -- topology ------------------------------------------------------

    def min_open(self, x: str) -> frozenset[str]:
        """Smallest open set containing x: the down-set of x."""
        return self.mask_to_labels(self.down_mask(x))

    def closure(self, s: Iterable[str]) -> frozenset[str]:
        """Topological closure: the up-set generated by s."""
        m = 0
        for x in s:
            m |= self.up_mask(x)
        return self.mask_to_labels(m)

    def is_closed(self, s: Iterable[str]) -> bool:
        s = frozenset(s)
        return self.closure(s) == s

    def is_open(self, s: Iterable[str]) -> bool:
        s = frozenset(s)
        for x in s:
            if not self.mask_to_labels(self.down_mask(x)) <= s:
                return False
        return True

    def closed_set_masks(self) -> list[int]:
        """All up-sets as masks, including 0 and the full set."""
        n = len(self.elements)
        # process elements so that everything above comes first (smaller
        # up-sets are higher); an element may join a mask only when all of
        # its strict upper bounds already did
        order = sorted(range(n), key=lambda i: bin(self._up[i]).count("1"))
        masks = [0]
        for i in order:
            strict_up = self._up[i] & ~(1 << i)
            masks += [m | 1 << i for m in masks if m & strict_up == strict_up]
        return masks

    def all_closed_sets(self, max_elements: int = MAX_CLOSED_ENUM) -> "SubsetFamily":
        """Every closed (up-) set, in canonical order, as a SubsetFamily."""
        if len(self.elements) > max_elements:
            raise TooLarge(f"{len(self.elements)} elements exceeds bound {max_elements}")
        sets = [self.mask_to_labels(m) for m in self.closed_set_masks()]
        sets.sort(key=subset_sort_key)
        return SubsetFamily(self, sets)

    # -- order structure -------------------------------------------------

    def maximal_points(self) -> frozenset[str]:
        return frozenset(
            x for i, x in enumerate(self.elements) if self._up[i] == 1 << i
        )

    def minimal_points(self) -> frozenset[str]:
        return frozenset(
            x for i, x in enumerate(self.elements) if self._down[i] == 1 << i
        )

    def covers_of(self, x: str) -> frozenset[str]:
        self.index(x)
        return frozenset(b for a, b in self.covers if a == x)

    def covered_by(self, x: str) -> frozenset[str]:
        self.index(x)
        return frozenset(a for a, b in self.covers if b == x)

    def maximal_chains(self) -> list[tuple[str, ...]]:
        """All cover chains from a minimal to a maximal point, bottom-to-top,
        in lexicographic order on the label sequence."""
        up_covers: dict[str, list[str]] = {x: sorted(self.covers_of(x)) for x in self.elements}
        out: list[tuple[str, ...]] = []

        def extend(chain: list[str]) -> None:
            tops = up_covers[chain[-1]]
            if not tops:
                out.append(tuple(chain))
                return
            for y in tops:
                chain.append(y)
                extend(chain)
                chain.pop()

        for x in sorted(self.minimal_points()):
            extend([x])
        return out

    def height(self, x: str) -> int:
        """Length of the longest chain strictly below x."""
        i = self.index(x)
        below = [j for j in range(len(self.elements)) if self._down[i] >> j & 1 and j != i]
        if not below:
            return 0
        return 1 + max(self.height(self.elements[j]) for j in below)

    def subposet(self, labels: Iterable[str]) -> "Poset":
        """Induced subposet; keeps the declared element order."""
        keep = [x for x in self.elements if x in frozenset(labels)]
        for x in labels:
            self.index(x)
        idx = {x: i for i, x in enumerate(keep)}
        masks = []
        for x in keep:
            m = 0
            for y in keep:
                if self.leq(x, y):
                    m |= 1 << idx[y]
            masks.append(m)
        return Poset(keep, masks)

    # -- automorphisms and isomorphism ---------------------------------

    def _invariant(self, i: int) -> tuple[int, int]:
        return (bin(self._down[i]).count("1"), bin(self._up[i]).count("1"))

    def automorphisms(self, max_elements: int = MAX_AUTOS) -> list[dict[str, str]]:
        """All order-automorphisms as label maps; identity first."""
        if len(self.elements) > max_elements:
            raise TooLarge(f"{len(self.elements)} elements exceeds bound {max_elements}")
        out = [f for f in self._isomorphisms(self)]
        out.sort(key=lambda f: tuple(f[x] for x in self.elements))
        return out

    def _isomorphisms(self, other: "Poset") -> Iterator[dict[str, str]]:
        n = len(self.elements)
        if n != len(other.elements):
            return
        mine = [self._invariant(i) for i in range(n)]
        theirs = [other._invariant(i) for i in range(n)]
        if sorted(mine) != sorted(theirs):
            return
        candidates = [
            [j for j in range(n) if theirs[j] == mine[i]] for i in range(n)
        ]
        assignment: list[int] = []

        def backtrack(i: int) -> Iterator[dict[str, str]]:
            if i == n:
                yield {self.elements[k]: other.elements[assignment[k]] for k in range(n)}
                return
            for j in candidates[i]:
                if j in assignment:
                    continue
                ok = True
                for k in range(i):
                    if (self._up[k] >> i & 1) != (other._up[assignment[k]] >> j & 1):
                        ok = False
                        break
                    if (self._up[i] >> k & 1) != (other._up[j] >> assignment[k] & 1):
                        ok = False
                        break
                if ok:
                    assignment.append(j)
                    yield from backtrack(i + 1)
                    assignment.pop()

        yield from backtrack(0)

    def isomorphism_to(self, other: "Poset") -> dict[str, str] | None:
        return next(self._isomorphisms(other), None)

    def is_isomorphic(self, other: "Poset") -> bool:
        return self.isomorphism_to(other) is not None

    def canonical_key(self) -> tuple:
        """Isomorphism-invariant key (exact, by minimizing over relabelings)."""
        n = len(self.elements)
        inv = [self._invariant(i) for i in range(n)]
        best: tuple | None = None
        # order candidate positions by invariant so equal keys collide early
        slots = sorted(range(n), key=lambda i: inv[i])
        for perm in permutations(range(n)):
            # perm[k] = original index placed at slot k; prune by invariant
            if any(inv[perm[k]] != inv[slots[k]] for k in range(n)):
                continue
            rel = tuple(
                tuple((self._up[perm[a]] >> perm[b]) & 1 for b in range(n))
                for a in range(n)
            )
            if best is None or rel < best:
                best = rel
        assert best is not None
        return (n, best)

    # -- rendering -------------------------------------------------------

    def hasse_dot(self) -> str:
        """DOT digraph of the Hasse diagram; edges point upward."""
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for x in self.elements:
            lines.append(f'  "{x}";')
        for a, b in sorted(self.covers):
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = ["elements: " + " ".join(self.elements)]
        for a, b in sorted(self.covers):
            lines.append(f"{a} < {b}")
        return "\n".join(lines) + "\n"


class SubsetFamily:
    """A list of subsets of a poset's elements, in a fixed order."""

    __slots__ = ("ground", "sets")

    def __init__(self, ground: Poset, sets: Iterable[Iterable[str]]):
        self.ground = ground
        self.sets: tuple[frozenset[str], ...] = tuple(frozenset(s) for s in sets)
        universe = frozenset(ground.elements)
        for s in self.sets:
            if not s <= universe:
                raise UnknownLabel(sorted(s - universe)[0])

    def __iter__(self) -> Iterator[frozenset[str]]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __contains__(self, s: object) -> bool:
        return frozenset(s) in set(self.sets)  # type: ignore[arg-type]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubsetFamily) and set(self.sets) == set(other.sets)

    def __hash__(self) -> int:
        return hash(frozenset(self.sets))

    def __repr__(self) -> str:
        return "SubsetFamily([" + ", ".join(render_subset(s) for s in self.sets) + "])"

    def closed_under_union_intersection(self) -> bool:
        pool = set(self.sets)
        return all(a | b in pool and a & b in pool for a in pool for b in pool)


def parse_poset(text: str) -> Poset:
    """Parse the poset text format: an ``elements:`` line then ``a < b`` lines."""
    labels: list[str] | None = None
    pairs: list[tuple[str, str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("elements:"):
            if labels is not None:
                raise _parse_error("duplicate elements line")
            labels = line[len("elements:"):].split()
        else:
            parts = [p.strip() for p in line.split("<")]
            if len(parts) != 2 or not all(parts):
                raise _parse_error(f"expected 'a < b', got {line!r}")
            pairs.append((parts[0], parts[1]))
    if labels is None:
        raise _parse_error("missing elements line")
    return Poset.from_covers(labels, pairs)


def _parse_error(msg: str):
    from .errors import ParseError

    return ParseError(msg)


def _reachability(succ: list[int], n: int) -> list[int]:
    up = [succ[i] | 1 << i for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            m = up[i]
            acc = m
            for j in range(n):
                if m >> j & 1:
                    acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return up


def _cycle_witness(labels: list[str], succ: list[int], i: int, j: int) -> str:
    # find a short directed path i -> ... -> j, close it with j -> ... -> i
    def path(a: int, b: int) -> list[int]:
        prev = {a: a}
        frontier = [a]
        while frontier:
            nxt = []
            for u in frontier:
                for v in range(len(labels)):
                    if succ[u] >> v & 1 and v not in prev:
                        prev[v] = u
                        nxt.append(v)
            frontier = nxt
        seq = [b]
        while seq[-1] != a:
            seq.append(prev[seq[-1]])
        return seq[::-1]

    loop = path(i, j) + path(j, i)[1:]
    return "cycle: " + " < ".join(labels[k] for k in loop)

"""Classification of the algebras over a fixed finite spectrum.

A defector assigns to every poset point a value in {0, 1, 2, ..., oo},
positive on maximal points.  Over a forest the construction is direct: the
auxiliary forest doubles the non-maximal points, its maximal chains carry
tensor-product Hilbert spaces (an l^2 factor per interior point, a fiber
C^d at the end), and each point x contributes the generator block
"identity on everything below x, compacts on everything above".

Over an arbitrary poset the construction is pulled back through the
covering forest: ropes are saturated chains from a minimal element, ordered
by inclusion (which on saturated chains is prefix order, so the rope poset
is a forest), and the defector is composed with the endpoint map.  Ropes
with a common endpoint have isomorphic upward subtrees, so they share one
compact factor; the generator attached to a point is the diagonal coupling
of its ropes' blocks: independent scalars, one shared compact operator.

Every chain of the rope forest is itself a rope, so the total Hilbert space
carries one atom per rope: the tensor of the l^2 factors of its proper
prefixes with the fiber of its endpoint.  A zero defector value kills the
fiber and the atom with it.  Infinite-dimensional atoms are displayed as
numbered abstract components (H1, H2, ... in rope order, with a legend);
finite atoms stay concrete.

Expanded form (one block per rope, scalars independent) and fused form
(identity parts of one point's ropes merged over the shared compact factor)
are two renderings of the same diagonal term; closed forms in the
literature appear in both styles, and they differ as generating sets.

Ideals correspond to closed subsets: the ideal of a closed E collects the
generator blocks of the open complement, and it is primitive exactly when
E is the closure of a single point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import InvalidDefector, NotAForest, NotClosed, UnknownLabel
from .exprs import (
    INF,
    AlgebraExpr,
    AlgebraTerm,
    Compacts,
    Fin,
    HilbertExpr,
    IdentityTensorCompacts,
    Named,
    ScalarIdentity,
    Sep,
    Sum,
    Ten,
    canonicalize_hilbert,
    dsum,
    is_zero,
    tensor,
    total_dim,
)
from .poset import Poset

DefectorValue = int | float  # nonnegative int or math.inf


class Defector:
    """Total assignment of {oo, 0, 1, 2, ...} to the points of a poset."""

    __slots__ = ("values",)

    def __init__(self, values: Mapping[str, DefectorValue]):
        vals = {}
        for x, v in values.items():
            if v == INF:
                vals[x] = INF
            elif isinstance(v, int) and not isinstance(v, bool) and v >= 0:
                vals[x] = v
            else:
                raise InvalidDefector(f"bad value for {x}: {v!r}")
        self.values: dict[str, DefectorValue] = vals

    def __getitem__(self, x: str) -> DefectorValue:
        try:
            return self.values[x]
        except KeyError:
            raise InvalidDefector(f"no value for point {x}") from None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Defector) and self.values == other.values

    def __hash__(self) -> int:
        return hash(frozenset(self.values.items()))

    def __repr__(self) -> str:
        return f"Defector({self.values!r})"

    def restrict(self, labels: Iterable[str]) -> "Defector":
        return Defector({x: self.values[x] for x in labels})

    def check_total(self, p: Poset) -> None:
        missing = [x for x in p.elements if x not in self.values]
        if missing:
            raise InvalidDefector(f"missing value(s) for: {', '.join(missing)}")

    def violations(self, p: Poset) -> list[str]:
        """Maximal points where positivity fails."""
        self.check_total(p)
        return sorted(x for x in p.maximal_points() if self.values[x] == 0)

    def is_valid(self, p: Poset) -> bool:
        return not self.violations(p)

    def render(self) -> str:
        def show(v: DefectorValue) -> str:
            return "inf" if v == INF else str(v)

        return ", ".join(f"{x}={show(v)}" for x, v in sorted(self.values.items()))


def canonical_defector(p: Poset) -> Defector:
    """One on maximal points, zero elsewhere; always valid."""
    maxima = p.maximal_points()
    return Defector({x: 1 if x in maxima else 0 for x in p.elements})


def parse_defector(text: str) -> Defector:
    values: dict[str, DefectorValue] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, val = part.partition("=")
        name, val = name.strip(), val.strip()
        if not name or not val:
            raise InvalidDefector(f"expected name=value, got {part!r}")
        if val in ("inf", "oo"):
            values[name] = INF
        else:
            try:
                values[name] = int(val)
            except ValueError:
                raise InvalidDefector(f"bad value {val!r} for {name}") from None
    return Defector(values)


# -- forests ---------------------------------------------------------------


def is_forest(p: Poset) -> bool:
    """True when any two points below a common point are comparable."""
    for z in p.elements:
        below = sorted(p.min_open(z))
        for i, x in enumerate(below):
            for y in below[i + 1 :]:
                if not (p.leq(x, y) or p.leq(y, x)):
                    return False
    return True


AuxChain = tuple[tuple[str, int], ...]  # ((point, superscript), ...)


@dataclass(frozen=True)
class AuxForest:
    """The doubled forest: x^(1) for every x, x^(2) for non-maximal x;
    a^(2) sits under b^(1) and b^(2) exactly when a sits under b."""

    forest: Poset
    base: Poset
    chains: tuple[AuxChain, ...]

    def chains_through(self, x: str) -> tuple[AuxChain, ...]:
        return tuple(c for c in self.chains if any(pt == x for pt, _ in c))


def _aux_label(x: str, sup: int) -> str:
    return f"{x}^({sup})"


def auxiliary_forest(f: Poset) -> AuxForest:
    if not is_forest(f):
        raise NotAForest("the input poset is not a forest")
    maxima = f.maximal_points()
    labels = []
    for x in f.elements:
        labels.append(_aux_label(x, 1))
        if x not in maxima:
            labels.append(_aux_label(x, 2))
    pairs = []
    for a, b in f.covers:
        pairs.append((_aux_label(a, 2), _aux_label(b, 1)))
        if b not in maxima:
            pairs.append((_aux_label(a, 2), _aux_label(b, 2)))
    aux = Poset.from_covers(labels, pairs)
    chains = []
    for raw in aux.maximal_chains():
        parsed = tuple(
            (lbl[: lbl.rindex("^(")], int(lbl[-2])) for lbl in raw
        )
        chains.append(parsed)
    chains.sort(key=lambda c: tuple(pt for pt, _ in c))
    return AuxForest(aux, f, tuple(chains))


def _fiber(x: str, d: Defector) -> HilbertExpr:
    v = d[x]
    return Sep(f"@{x}") if v == INF else Fin(int(v))


def chain_hilbert(chain: AuxChain, d: Defector) -> HilbertExpr:
    """Tensor of l^2 factors along the chain with the end fiber C^{d(end)}."""
    *body, (end, sup) = chain
    assert sup == 1 and all(s == 2 for _, s in body)
    return canonicalize_hilbert(
        tensor(*[Sep(pt) for pt, _ in body], _fiber(end, d))
    )


def total_hilbert(f: Poset, d: Defector) -> HilbertExpr:
    """Direct sum over all maximal chains of the auxiliary forest."""
    d.check_total(f)
    aux = auxiliary_forest(f)
    return canonicalize_hilbert(dsum(*(chain_hilbert(c, d) for c in aux.chains)))


@dataclass(frozen=True)
class PointSpace:
    point: str
    hx: HilbertExpr          # tensor of l^2 factors below the point
    tail: HilbertExpr        # space of the upward subforest
    space: HilbertExpr       # canonical form of hx (x) tail

    @property
    def factored(self) -> tuple[HilbertExpr, HilbertExpr]:
        return (self.hx, self.tail)


def point_subspace(f: Poset, d: Defector, x: str) -> PointSpace:
    """Chains through the point, returned in the factored form
    (product below the point) tensor (space of the upward subforest)."""
    d.check_total(f)
    aux = auxiliary_forest(f)
    if x not in f:
        raise UnknownLabel(x)
    direct = canonicalize_hilbert(
        dsum(*(chain_hilbert(c, d) for c in aux.chains_through(x)))
    )
    below = sorted(p for p in f.min_open(x) if p != x)
    hx = canonicalize_hilbert(tensor(*[Sep(pt) for pt in below])) if below else Fin(1)
    upset = f.subposet(f.closure([x]))
    tail = total_hilbert(upset, d.restrict(upset.elements))
    space = canonicalize_hilbert(tensor(hx, tail))
    if space != direct:
        from .errors import FactorizationMismatch

        raise FactorizationMismatch(
            f"H({x}) direct sum and factored form disagree"
        )
    return PointSpace(x, hx, tail, space)


def generator_algebra(f: Poset, d: Defector, x: str) -> AlgebraTerm | None:
    """The block attached to one point: identity below, compacts above.
    None when the block degenerates to zero."""
    ps = point_subspace(f, d, x)
    from .exprs import canonical_term

    return canonical_term(
        IdentityTensorCompacts(ps.hx, ps.tail, tag=x)
    )


def algebra_of_forest(f: Poset, d: Defector, override: bool = False) -> AlgebraExpr:
    """Generating set of all point blocks, in canonical order (concrete
    spaces).  Incomparability annihilation and absorption along the order
    are structural: block supports meet only along comparabilities."""
    d, _ = effective_defector(f, d, override)
    terms = [generator_algebra(f, d, x) for x in f.elements]
    return AlgebraExpr([t for t in terms if t is not None])


# -- covering forest ---------------------------------------------------------


Rope = tuple[str, ...]


def ropes_of(p: Poset) -> list[Rope]:
    """Saturated chains from a minimal element, in lexicographic order."""
    out: list[Rope] = []

    def extend(chain: list[str]) -> None:
        out.append(tuple(chain))
        for y in sorted(p.covers_of(chain[-1])):
            chain.append(y)
            extend(chain)
            chain.pop()

    for x in sorted(p.minimal_points()):
        extend([x])
    out.sort()
    return out


def rope_label(r: Rope) -> str:
    return "<".join(r)


@dataclass(frozen=True)
class CoveringForest:
    base: Poset
    forest: Poset                 # poset of ropes under inclusion
    ropes: tuple[Rope, ...]
    endpoint: dict[str, str] = field(compare=False)  # rope label -> point

    def fiber_of(self, x: str) -> tuple[Rope, ...]:
        return tuple(r for r in self.ropes if r[-1] == x)


def covering_forest(p: Poset) -> CoveringForest:
    """All ropes ordered by inclusion, with the (surjective) endpoint map.

    On saturated chains inclusion is prefix order, so the result is always
    a forest.
    """
    ropes = ropes_of(p)
    labels = [rope_label(r) for r in ropes]
    pairs = [
        (rope_label(r[:-1]), rope_label(r))
        for r in ropes
        if len(r) > 1
    ]
    forest = Poset.from_covers(labels, pairs)
    assert is_forest(forest)
    endpoint = {rope_label(r): r[-1] for r in ropes}
    return CoveringForest(p, forest, tuple(ropes), endpoint)


# -- defector repair under the positivity override ---------------------------


def _reduce_nonmaximal(p: Poset, d: Defector) -> tuple[Defector, list[str]]:
    """Lower non-maximal values by the equivalence moves (subtracting the
    value of a covering point); yields an equivalent defector."""
    notes = []
    values = dict(d.values)
    order = sorted(p.elements, key=p.height)
    maxima = p.maximal_points()
    for y in order:
        if y in maxima:
            continue
        v = values[y]
        covers = [d.values[z] for z in p.covers_of(y)]
        if any(c == INF for c in covers):
            new: DefectorValue = 0
        else:
            finite = [int(c) for c in covers if c > 0]
            if not finite or v == INF or v == 0:
                continue
            g = math.gcd(*finite)
            new = int(v) % g
        if new != v:
            values[y] = new
            notes.append(f"{y}: {v} -> {new}")
    return Defector(values), notes


def effective_defector(
    p: Poset, d: Defector, override: bool
) -> tuple[Defector, list[str]]:
    """Validate, or under the override rewrite an invalid defector into the
    construction-ready one: non-maximal values are reduced by equivalence
    moves (an isomorphic algebra), and a zero at a maximal point -- which no
    move can repair and the construction cannot carry -- is raised to one.
    """
    d.check_total(p)
    viol = d.violations(p)
    if not viol:
        return d, []
    if not override:
        raise InvalidDefector(
            "defector must be positive at maximal point(s): " + ", ".join(viol)
        )
    notes = [f"positivity fails at maximal point(s): {', '.join(viol)}"]
    reduced, moves = _reduce_nonmaximal(p, d)
    if moves:
        notes.append("reduced non-maximal values by equivalence moves: " + "; ".join(moves))
    values = dict(reduced.values)
    for x in viol:
        values[x] = 1
    notes.append("raised violating maximal values to 1: " + ", ".join(f"{x}: 0 -> 1" for x in viol))
    return Defector(values), notes


# -- the construction over an arbitrary poset --------------------------------


@dataclass(frozen=True)
class ChainAtom:
    """One summand of the total Hilbert space, indexed by its rope."""

    rope: Rope
    concrete: HilbertExpr       # product of l^2 prefixes with the end fiber
    name: str | None            # abstract component name for infinite atoms

    @property
    def display(self) -> HilbertExpr:
        return Named(self.name) if self.name is not None else self.concrete


class Construction:
    """The pulled-back construction over a poset with a defector.

    Holds the covering forest, the nonzero chain atoms with their abstract
    names, the per-point diagonal generator terms, and the total algebra in
    expanded, fused and concrete forms.
    """

    def __init__(self, p: Poset, d: Defector, override: bool = False):
        self.poset = p
        self.given_defector = d
        self.defector, self.notes = effective_defector(p, d, override)
        self.cover = covering_forest(p)
        self._build_atoms()
        self._build_terms()

    # atoms ------------------------------------------------------------

    def _concrete_atom(self, rope: Rope) -> HilbertExpr:
        factors = [Sep(pt) for pt in rope[:-1]]
        return canonicalize_hilbert(tensor(*factors, _fiber(rope[-1], self.defector)))

    def _build_atoms(self) -> None:
        self.atoms: dict[Rope, ChainAtom] = {}
        counter = 0
        for rope in self.cover.ropes:
            space = self._concrete_atom(rope)
            if is_zero(space):
                continue
            name = None
            if total_dim(space) == INF:
                counter += 1
                name = str(counter)
            self.atoms[rope] = ChainAtom(rope, space, name)

    def atom_list(self) -> list[ChainAtom]:
        return [self.atoms[r] for r in self.cover.ropes if r in self.atoms]

    def total_space(self, concrete: bool = False) -> HilbertExpr:
        parts = [a.concrete if concrete else a.display for a in self.atom_list()]
        return canonicalize_hilbert(dsum(*parts))

    def point_atoms(self, x: str) -> list[ChainAtom]:
        self.poset.index(x)
        return [a for a in self.atom_list() if x in a.rope]

    # generator terms ----------------------------------------------------

    def _suffix_space(self, rope: Rope, s: Rope) -> HilbertExpr:
        """Factor of atom(s) above the rope: l^2 per point from the rope's
        endpoint on, then the end fiber."""
        body = s[len(rope) - 1 : -1]
        return canonicalize_hilbert(
            tensor(*[Sep(pt) for pt in body], _fiber(s[-1], self.defector))
        )

    def _tail_space(self, x: str) -> HilbertExpr:
        """Common compact factor of the ropes ending at x; independent of
        the rope since upward subtrees of a common endpoint are isomorphic."""
        rope = self.cover.fiber_of(x)[0]
        suffixes = [
            self._suffix_space(rope, s)
            for s in self.cover.ropes
            if s[: len(rope)] == rope
        ]
        return canonicalize_hilbert(dsum(*suffixes))

    def _build_terms(self) -> None:
        self.point_terms: dict[str, list[AlgebraTerm]] = {}
        self.point_terms_concrete: dict[str, list[AlgebraTerm]] = {}
        fused: list[AlgebraTerm] = []
        for x in self.poset.elements:
            tail = self._tail_space(x)
            terms: list[AlgebraTerm] = []
            terms_c: list[AlgebraTerm] = []
            for rope in self.cover.fiber_of(x):
                pair = self._rope_term(x, rope, tail)
                if pair is not None:
                    terms.append(pair[0])
                    terms_c.append(pair[1])
            self.point_terms[x] = terms
            self.point_terms_concrete[x] = terms_c
            fused_term = self._fused_term(x, tail) if terms else None
            if fused_term is not None:
                fused.append(fused_term)
        self.algebra = AlgebraExpr(
            [t for ts in self.point_terms.values() for t in ts]
        )
        self.concrete_algebra = AlgebraExpr(
            [t for ts in self.point_terms_concrete.values() for t in ts]
        )
        self.fused_algebra = AlgebraExpr(fused)

    def _rope_term(
        self, x: str, rope: Rope, tail: HilbertExpr
    ) -> tuple[AlgebraTerm, AlgebraTerm] | None:
        """The expanded block of one rope: identity along the rope's prefix
        factors, the shared compact factor above; returned in display and
        concrete flavors, or None when it degenerates to zero."""
        atoms_over = [a for a in self.atom_list() if a.rope[: len(rope)] == rope]
        if not atoms_over or is_zero(tail):
            return None
        support = frozenset(a.rope for a in atoms_over)
        display_sum = dsum(*(a.display for a in atoms_over))
        concrete_sum = dsum(*(a.concrete for a in atoms_over))
        if len(rope) == 1:
            # minimal point: plain compacts on everything above it
            return (
                Compacts(display_sum, tag=x, support=support),
                Compacts(concrete_sum, tag=x, support=support),
            )
        if total_dim(tail) == 1:
            # scalar fiber: multiples of the identity on this rope's atom
            return (
                ScalarIdentity(display_sum, tag=x, support=support),
                ScalarIdentity(concrete_sum, tag=x, support=support),
            )
        ident = canonicalize_hilbert(tensor(*[Sep(pt) for pt in rope[:-1]]))
        term = IdentityTensorCompacts(ident, tail, tag=x, support=support)
        return term, term

    def _fused_term(self, x: str, tail: HilbertExpr) -> AlgebraTerm | None:
        """Identity parts of the point's ropes merged over the one shared
        compact factor ("fused" closed-form style)."""
        atoms = self.point_atoms(x)
        if not atoms or is_zero(tail):
            return None
        support = frozenset(a.rope for a in atoms)
        display_sum = dsum(*(a.display for a in atoms))
        if total_dim(tail) == 1:
            return ScalarIdentity(display_sum, tag=x, support=support)
        ropes = [r for r in self.cover.fiber_of(x) if any(a.rope[: len(r)] == r for a in atoms)]
        if all(len(r) == 1 for r in ropes):
            return Compacts(display_sum, tag=x, support=support)
        ident = canonicalize_hilbert(
            dsum(*(tensor(*[Sep(pt) for pt in r[:-1]]) for r in ropes))
        )
        return IdentityTensorCompacts(ident, tail, tag=x, support=support)

    # reporting ----------------------------------------------------------

    def point_table(self, x: str) -> AlgebraExpr:
        """All generator terms supported within H(x)."""
        ropes_through = frozenset(a.rope for a in self.point_atoms(x))
        return AlgebraExpr(
            [
                t
                for t in self.algebra.terms
                if t.support is not None and t.support <= ropes_through
            ]
        )


def construct(p: Poset, d: Defector, override: bool = False) -> Construction:
    return Construction(p, d, override)


def algebra_of_poset(p: Poset, d: Defector, override: bool = False) -> AlgebraExpr:
    """Canonical generating sum over all points, expanded form (one block
    per rope; independent scalar parts, shared compact factors)."""
    return Construction(p, d, override).algebra


# -- ideals from closed subsets ----------------------------------------------


@dataclass(frozen=True)
class IdealExpr:
    closed_set: frozenset[str]
    complement: frozenset[str]
    expr: AlgebraExpr
    primitive: bool
    witness: str | None   # the point whose closure is the closed set
    proper: bool


def ideal_of_closed(
    p: Poset, d: Defector, closed_set: Iterable[str], override: bool = False
) -> IdealExpr:
    """The ideal attached to a closed subset: the generator blocks of the
    open complement.  Primitive exactly for point closures."""
    e = frozenset(closed_set)
    if not p.is_closed(e):
        raise NotClosed(f"{sorted(e)} is not closed")
    c = Construction(p, d, override)
    u = frozenset(p.elements) - e
    terms = [t for x in sorted(u, key=p.index) for t in c.point_terms[x]]
    witness = None
    for x in p.elements:
        if p.closure([x]) == e:
            witness = x
            break
    return IdealExpr(
        closed_set=e,
        complement=u,
        expr=AlgebraExpr(terms),
        primitive=witness is not None,
        witness=witness,
        proper=bool(e),
    )


# -- defector equivalence ----------------------------------------------------


def immediately_equivalent(d: Defector, d2: Defector, p: Poset) -> bool:
    """Equal off at most one non-maximal point, where the values differ by
    the value of a covering point (or arbitrarily, under an infinite cover).
    """
    d.check_total(p)
    d2.check_total(p)
    diff = [x for x in p.elements if d[x] != d2[x]]
    if not diff:
        return True
    if len(diff) > 1:
        return False
    y = diff[0]
    if y in p.maximal_points():
        return False
    for z in p.covers_of(y):
        if d[z] != d2[z]:
            continue
        if d[z] == INF:
            return True
        if d[z] > 0 and (d[y] == d2[y] + d[z] or d2[y] == d[y] + d[z]):
            return True
    return False


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    message: str

    def __bool__(self) -> bool:
        return self.equivalent


def _canon_state(p: Poset, values: tuple[DefectorValue, ...], autos) -> tuple:
    def enc(v: DefectorValue) -> tuple[int, int]:
        return (1, 0) if v == INF else (0, int(v))

    best = None
    for f in autos:
        t = tuple(enc(values[p.index(f[x])]) for x in p.elements)
        if best is None or t < best:
            best = t
    assert best is not None
    return best


def equivalent_defectors(
    d: Defector, d2: Defector, p: Poset, bound: int | None = None
) -> EquivalenceVerdict:
    """Breadth-first search over immediate-equivalence moves, with states
    identified up to poset automorphism and finite values capped.

    A negative answer means "not found within bound": the move space is
    explored only up to the cap.
    """
    d.check_total(p)
    d2.check_total(p)
    if bound is None:
        finite = [int(v) for v in (*d.values.values(), *d2.values.values()) if v != INF]
        bound = (max(finite) if finite else 0) + len(p)
    autos = p.automorphisms()
    maxima = p.maximal_points()

    def moves(values: tuple[DefectorValue, ...]):
        for y in p.elements:
            if y in maxima:
                continue
            iy = p.index(y)
            for z in p.covers_of(y):
                dz = values[p.index(z)]
                if dz == INF:
                    for v in list(range(bound + 1)) + [INF]:
                        if v != values[iy]:
                            yield iy, v
                elif dz != 0:
                    if values[iy] != INF:
                        up = values[iy] + dz
                        if up <= bound:
                            yield iy, up
                        if values[iy] >= dz:
                            yield iy, values[iy] - dz
        return

    start = tuple(d[x] for x in p.elements)
    goal = _canon_state(p, tuple(d2[x] for x in p.elements), autos)
    seen = {_canon_state(p, start, autos)}
    frontier = [start]
    while frontier:
        if goal in seen:
            return EquivalenceVerdict(True, "connected by equivalence moves")
        nxt = []
        for values in frontier:
            for i, v in moves(values):
                new = values[:i] + (v,) + values[i + 1 :]
                key = _canon_state(p, new, autos)
                if key not in seen:
                    seen.add(key)
                    nxt.append(new)
        frontier = nxt
    if goal in seen:
        return EquivalenceVerdict(True, "connected by equivalence moves")
    return EquivalenceVerdict(False, f"not found within bound {bound}")

"""Symbolic Hilbert-space and operator-algebra expressions with canonical forms.

Hilbert expressions are built from three atoms -- an abstract named component
``H<name>``, a separable infinite-dimensional factor ``l<name>``, and a
finite space ``C^d`` -- combined by tensor products and direct sums.  The
canonical form is a direct sum of tensor products of atoms: tensors are
distributed over sums, ``C^0`` summands vanish, ``C^1`` tensor factors
vanish, finite factors are multiplied together, and operands are sorted.
Direct sums keep multiplicity (they are not idempotent).

Algebra expressions are generating sets of block terms: scalar identities
``C.I(H)``, compacts ``K(H)``, matrix blocks ``M(n)``, and identity-tensor-
compact blocks.  Compacts on a finite space of total dimension n normalize
to ``M(n)``.  Terms may carry a point tag and a support key as metadata;
metadata never takes part in equality.

The ASCII rendering uses ``(+)`` and ``(x)`` for the sum and tensor symbols;
the Unicode rendering uses the usual circled operators.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import IncompleteRelabeling, ParseError

INF = math.inf


# -- Hilbert expressions ------------------------------------------------


@dataclass(frozen=True)
class Named:
    """Abstract component H<name>."""

    name: str


@dataclass(frozen=True)
class Sep:
    """A separable infinite-dimensional factor l<name> (an l^2 copy)."""

    name: str


@dataclass(frozen=True)
class Fin:
    """The finite space C^dim."""

    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("negative dimension")


@dataclass(frozen=True)
class Ten:
    factors: tuple["HilbertExpr", ...]


@dataclass(frozen=True)
class Sum:
    terms: tuple["HilbertExpr", ...]


HilbertExpr = Union[Named, Sep, Fin, Ten, Sum]

ZERO_H: HilbertExpr = Sum(())
SCALAR_H: HilbertExpr = Fin(1)


def dsum(*terms: HilbertExpr) -> HilbertExpr:
    return Sum(tuple(terms))


def tensor(*factors: HilbertExpr) -> HilbertExpr:
    return Ten(tuple(factors))


def _name_key(name: str) -> tuple[int, str]:
    # short-then-lex so that numeric names sort numerically (H2 before H10)
    return (len(name), name)


def _atom_key(a: HilbertExpr) -> tuple:
    if isinstance(a, Named):
        return (0,) + _name_key(a.name)
    if isinstance(a, Sep):
        return (1,) + _name_key(a.name)
    assert isinstance(a, Fin)
    return (2, a.dim)


def _products(e: HilbertExpr) -> list[list[HilbertExpr]]:
    """Expand into a list of atom lists (sum of products)."""
    if isinstance(e, (Named, Sep, Fin)):
        return [[e]]
    if isinstance(e, Ten):
        out: list[list[HilbertExpr]] = [[]]
        for f in e.factors:
            out = [p + q for p in out for q in _products(f)]
        return out
    if isinstance(e, Sum):
        out = []
        for t in e.terms:
            out.extend(_products(t))
        return out
    raise TypeError(f"not a HilbertExpr: {e!r}")


def _normalize_product(atoms: list[HilbertExpr]) -> tuple[HilbertExpr, ...] | None:
    """Sorted atom tuple with finite factors merged; None for a zero product."""
    dim = 1
    rest: list[HilbertExpr] = []
    for a in atoms:
        if isinstance(a, Fin):
            dim *= a.dim
        else:
            rest.append(a)
    if dim == 0:
        return None
    rest.sort(key=_atom_key)
    if dim != 1 or not rest:
        rest.append(Fin(dim))
    return tuple(rest)


def canonicalize_hilbert(e: HilbertExpr) -> HilbertExpr:
    prods = []
    for p in _products(e):
        norm = _normalize_product(p)
        if norm is not None:
            prods.append(norm)
    prods.sort(key=lambda p: tuple(_atom_key(a) for a in p))
    if not prods:
        return ZERO_H
    wrapped = [p[0] if len(p) == 1 else Ten(p) for p in prods]
    if len(wrapped) == 1:
        return wrapped[0]
    return Sum(tuple(wrapped))


def hilbert_key(e: HilbertExpr) -> tuple:
    """Sortable encoding of the canonical form."""
    c = canonicalize_hilbert(e)
    if isinstance(c, (Named, Sep, Fin)):
        return (0, (_atom_key(c),))
    if isinstance(c, Ten):
        return (0, tuple(_atom_key(a) for a in c.factors))
    assert isinstance(c, Sum)
    return (1, tuple(hilbert_key(t) for t in c.terms))


def total_dim(e: HilbertExpr) -> int | float:
    """Total dimension; any separable or abstract factor makes it infinite."""
    c = canonicalize_hilbert(e)
    terms = c.terms if isinstance(c, Sum) else (c,)
    total: int | float = 0
    for t in terms:
        factors = t.factors if isinstance(t, Ten) else (t,)
        d: int | float = 1
        for a in factors:
            d = d * a.dim if isinstance(a, Fin) else INF
            if d == INF:
                break
        total += d
        if total == INF:
            break
    return total


def is_zero(e: HilbertExpr) -> bool:
    return canonicalize_hilbert(e) == ZERO_H


def hilbert_names(e: HilbertExpr) -> frozenset[str]:
    if isinstance(e, (Named, Sep)):
        return frozenset({e.name})
    if isinstance(e, Fin):
        return frozenset()
    parts = e.factors if isinstance(e, Ten) else e.terms
    out: set[str] = set()
    for p in parts:
        out |= hilbert_names(p)
    return frozenset(out)


def rename_hilbert(e: HilbertExpr, relabel: dict[str, str]) -> HilbertExpr:
    if isinstance(e, Named):
        return Named(relabel[e.name])
    if isinstance(e, Sep):
        return Sep(relabel[e.name])
    if isinstance(e, Fin):
        return e
    if isinstance(e, Ten):
        return Ten(tuple(rename_hilbert(f, relabel) for f in e.factors))
    return Sum(tuple(rename_hilbert(t, relabel) for t in e.terms))


# -- algebra expressions ------------------------------------------------


@dataclass(frozen=True)
class ScalarIdentity:
    """Multiples of the identity on a subspace: C.I(space)."""

    space: HilbertExpr
    tag: str | None = field(default=None, compare=False)
    support: frozenset | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Compacts:
    """All compact operators on a subspace: K(space)."""

    space: HilbertExpr
    tag: str | None = field(default=None, compare=False)
    support: frozenset | None = field(default=None, compare=False)


@dataclass(frozen=True)
class MatrixBlock:
    """A full matrix block M(dim)."""

    dim: int
    tag: str | None = field(default=None, compare=False)
    support: frozenset | None = field(default=None, compare=False)


@dataclass(frozen=True)
class IdentityTensorCompacts:
    """Blocks of the form C.I(ident) (x) K(compact)."""

    ident: HilbertExpr
    compact: HilbertExpr
    tag: str | None = field(default=None, compare=False)
    support: frozenset | None = field(default=None, compare=False)


AlgebraTerm = Union[ScalarIdentity, Compacts, MatrixBlock, IdentityTensorCompacts]


def canonical_term(t: AlgebraTerm) -> AlgebraTerm | None:
    """Normalize one term; None when it degenerates to the zero operator."""
    tag, support = t.tag, t.support
    if isinstance(t, MatrixBlock):
        return None if t.dim == 0 else MatrixBlock(t.dim, tag=tag, support=support)
    if isinstance(t, ScalarIdentity):
        space = canonicalize_hilbert(t.space)
        if space == ZERO_H:
            return None
        return ScalarIdentity(space, tag=tag, support=support)
    if isinstance(t, Compacts):
        space = canonicalize_hilbert(t.space)
        if space == ZERO_H:
            return None
        n = total_dim(space)
        if n != INF:
            return MatrixBlock(int(n), tag=tag, support=support)
        return Compacts(space, tag=tag, support=support)
    assert isinstance(t, IdentityTensorCompacts)
    ident = canonicalize_hilbert(t.ident)
    compact = canonicalize_hilbert(t.compact)
    if compact == ZERO_H or ident == ZERO_H:
        return None
    if total_dim(ident) == 1:
        return canonical_term(Compacts(compact, tag=tag, support=support))
    if total_dim(compact) == 1:
        return ScalarIdentity(ident, tag=tag, support=support)
    return IdentityTensorCompacts(ident, compact, tag=tag, support=support)


def _term_key(t: AlgebraTerm) -> tuple:
    if isinstance(t, ScalarIdentity):
        return (0, hilbert_key(t.space))
    if isinstance(t, IdentityTensorCompacts):
        return (1, hilbert_key(t.ident), hilbert_key(t.compact))
    if isinstance(t, Compacts):
        return (2, hilbert_key(t.space))
    assert isinstance(t, MatrixBlock)
    return (3, t.dim)


class AlgebraExpr:
    """A generating set of block terms in canonical sorted order.

    Terms are normalized on construction (zero terms dropped) but duplicates
    are kept; :meth:`canonical` also merges structural duplicates and strips
    metadata, which is the right notion for comparing against a closed form.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[AlgebraTerm]):
        normalized = [c for c in (canonical_term(t) for t in terms) if c is not None]
        normalized.sort(key=lambda t: (_term_key(t), t.tag or ""))
        self.terms: tuple[AlgebraTerm, ...] = tuple(normalized)

    def __eq__(self, other: object) -> bool:
        # dataclass equality already ignores tag/support (compare=False)
        return isinstance(other, AlgebraExpr) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(_term_key(t) for t in self.terms))

    def __repr__(self) -> str:
        return f"AlgebraExpr({render_algebra(self)!r})"

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def canonical(self) -> "AlgebraExpr":
        seen: list[AlgebraTerm] = []
        out: list[AlgebraTerm] = []
        for t in self.terms:
            bare = _strip(t)
            if bare not in seen:
                seen.append(bare)
                out.append(bare)
        return AlgebraExpr(out)

    def names(self) -> frozenset[str]:
        out: set[str] = set()
        for t in self.terms:
            for sp in _term_spaces(t):
                out |= hilbert_names(sp)
        return frozenset(out)


def _strip(t: AlgebraTerm) -> AlgebraTerm:
    if isinstance(t, ScalarIdentity):
        return ScalarIdentity(t.space)
    if isinstance(t, Compacts):
        return Compacts(t.space)
    if isinstance(t, MatrixBlock):
        return MatrixBlock(t.dim)
    return IdentityTensorCompacts(t.ident, t.compact)


def _term_spaces(t: AlgebraTerm) -> tuple[HilbertExpr, ...]:
    if isinstance(t, (ScalarIdentity, Compacts)):
        return (t.space,)
    if isinstance(t, IdentityTensorCompacts):
        return (t.ident, t.compact)
    return ()


def rename_algebra(e: AlgebraExpr, relabel: dict[str, str]) -> AlgebraExpr:
    out: list[AlgebraTerm] = []
    for t in e.terms:
        if isinstance(t, ScalarIdentity):
            out.append(ScalarIdentity(rename_hilbert(t.space, relabel)))
        elif isinstance(t, Compacts):
            out.append(Compacts(rename_hilbert(t.space, relabel)))
        elif isinstance(t, MatrixBlock):
            out.append(t)
        else:
            out.append(
                IdentityTensorCompacts(
                    rename_hilbert(t.ident, relabel), rename_hilbert(t.compact, relabel)
                )
            )
    return AlgebraExpr(out)


def equal_upto_relabeling(
    e1: AlgebraExpr | HilbertExpr, e2: AlgebraExpr | HilbertExpr, relabel: dict[str, str]
) -> bool:
    """Structural equality of canonical forms after renaming components of e1.

    The relabeling must cover every component name of e1.
    """
    if isinstance(e1, AlgebraExpr) != isinstance(e2, AlgebraExpr):
        return False
    if isinstance(e1, AlgebraExpr):
        missing = e1.names() - set(relabel)
        if missing:
            raise IncompleteRelabeling(", ".join(sorted(missing)))
        assert isinstance(e2, AlgebraExpr)
        return rename_algebra(e1, relabel).canonical() == e2.canonical()
    missing = hilbert_names(e1) - set(relabel)
    if missing:
        raise IncompleteRelabeling(", ".join(sorted(missing)))
    return canonicalize_hilbert(rename_hilbert(e1, relabel)) == canonicalize_hilbert(e2)


# -- rendering ----------------------------------------------------------


def _sym(unicode: bool) -> dict[str, str]:
    if unicode:
        return {"sum": " ⊕ ", "ten": " ⊗ ", "ci": "ℂ·I"}
    return {"sum": " (+) ", "ten": " (x) ", "ci": "C.I"}


def render_hilbert(e: HilbertExpr, unicode: bool = False) -> str:
    s = _sym(unicode)

    def atom(a: HilbertExpr) -> str:
        if isinstance(a, Named):
            return "H" + a.name
        if isinstance(a, Sep):
            return "l" + a.name
        assert isinstance(a, Fin)
        return f"C^{a.dim}"

    c = canonicalize_hilbert(e)
    if c == ZERO_H:
        return "0"
    terms = c.terms if isinstance(c, Sum) else (c,)
    parts = []
    for t in terms:
        factors = t.factors if isinstance(t, Ten) else (t,)
        parts.append(s["ten"].join(atom(f) for f in factors))
    return s["sum"].join(parts)


def render_algebra(e: AlgebraExpr, unicode: bool = False) -> str:
    s = _sym(unicode)
    if not e.terms:
        return "0"

    def compact_part(space: HilbertExpr) -> str:
        n = total_dim(space)
        if n != INF:
            return f"M({int(n)})"
        return f"K({render_hilbert(space, unicode)})"

    parts = []
    for t in e.terms:
        if isinstance(t, ScalarIdentity):
            parts.append(f"{s['ci']}({render_hilbert(t.space, unicode)})")
        elif isinstance(t, Compacts):
            parts.append(f"K({render_hilbert(t.space, unicode)})")
        elif isinstance(t, MatrixBlock):
            parts.append(f"M({t.dim})")
        else:
            parts.append(
                f"{s['ci']}({render_hilbert(t.ident, unicode)})"
                f"{s['ten']}{compact_part(t.compact)}"
            )
    return s["sum"].join(parts)


# -- parsing of the ASCII canonical text ---------------------------------

_ATOM_RE = re.compile(r"^(H|l)([\w.<@~-]+)$|^C\^(\d+)$")


def _split_top(text: str, sep: str) -> list[str]:
    # the operator tokens "(+)" and "(x)" are themselves balanced, so plain
    # paren counting splits correctly as long as the separator is matched
    # before its characters are scanned
    parts: list[str] = []
    depth = 0
    current = ""
    i = 0
    while i < len(text):
        if depth == 0 and text.startswith(sep, i):
            parts.append(current)
            current = ""
            i += len(sep)
            continue
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        current += ch
        i += 1
    parts.append(current)
    return parts


def parse_hilbert(text: str) -> HilbertExpr:
    text = text.strip()
    if text == "0":
        return ZERO_H
    summands = []
    for part in _split_top(text, " (+) "):
        factors = []
        for f in _split_top(part.strip(), " (x) "):
            f = f.strip()
            if f.startswith("(") and f.endswith(")"):
                factors.append(parse_hilbert(f[1:-1]))
                continue
            m = _ATOM_RE.match(f)
            if not m:
                raise ParseError(f"bad Hilbert atom: {f!r}")
            if m.group(3) is not None:
                factors.append(Fin(int(m.group(3))))
            elif m.group(1) == "H":
                factors.append(Named(m.group(2)))
            else:
                factors.append(Sep(m.group(2)))
        summands.append(factors[0] if len(factors) == 1 else Ten(tuple(factors)))
    return summands[0] if len(summands) == 1 else Sum(tuple(summands))


def parse_algebra(text: str) -> AlgebraExpr:
    text = text.strip()
    if text == "0":
        return AlgebraExpr([])
    terms: list[AlgebraTerm] = []
    for part in _split_top(text, " (+) "):
        part = part.strip()
        ten = _split_top(part, " (x) ")
        if len(ten) == 2:
            ident = _parse_ci(ten[0].strip())
            terms.append(IdentityTensorCompacts(ident, _parse_k_or_m(ten[1].strip())))
        elif part.startswith("C.I(") and part.endswith(")"):
            terms.append(ScalarIdentity(parse_hilbert(part[4:-1])))
        else:
            terms.append(Compacts(_parse_k_or_m(part)))
    return AlgebraExpr(terms)


def _parse_ci(text: str) -> HilbertExpr:
    if not (text.startswith("C.I(") and text.endswith(")")):
        raise ParseError(f"expected C.I(...), got {text!r}")
    return parse_hilbert(text[4:-1])


def _parse_k_or_m(text: str) -> HilbertExpr:
    if text.startswith("K(") and text.endswith(")"):
        return parse_hilbert(text[2:-1])
    if text.startswith("M(") and text.endswith(")"):
        return Fin(int(text[2:-1]))
    raise ParseError(f"expected K(...) or M(...), got {text!r}")

"""Order-complex simplicial homology over the integers.

The order complex of a poset has the chains (totally ordered subsets) as
simplices; it is face-closed for free, because a subset of a chain is a
chain.  Homology is computed from the boundary matrices by exact integer
Smith normal form (Python integers, no overflow), which gives both Betti
numbers and torsion coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TooLarge
from .poset import Poset

MAX_HOMOLOGY_ELEMENTS = 14


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple[str, ...]
    # by_dim[k] lists the k-simplices as vertex tuples, sorted
    by_dim: tuple[tuple[tuple[str, ...], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.by_dim) - 1

    def simplices(self, k: int) -> tuple[tuple[str, ...], ...]:
        if 0 <= k < len(self.by_dim):
            return self.by_dim[k]
        return ()

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(s) for k, s in enumerate(self.by_dim))


def order_complex(p: Poset, max_elements: int = MAX_HOMOLOGY_ELEMENTS) -> SimplicialComplex:
    """Simplices are the nonempty chains of the poset, with vertices ordered
    upward along the order."""
    if len(p) > max_elements:
        raise TooLarge(f"{len(p)} elements exceeds bound {max_elements}")
    chains: list[tuple[str, ...]] = []

    def extend(chain: list[str]) -> None:
        chains.append(tuple(chain))
        top = chain[-1]
        for y in sorted(p.elements):
            if y != top and p.leq(top, y):
                chain.append(y)
                extend(chain)
                chain.pop()

    for x in sorted(p.elements):
        extend([x])
    by_dim: dict[int, list[tuple[str, ...]]] = {}
    for c in chains:
        by_dim.setdefault(len(c) - 1, []).append(c)
    packed = tuple(
        tuple(sorted(by_dim.get(k, ()))) for k in range(max(by_dim) + 1)
    )
    return SimplicialComplex(tuple(sorted(p.elements)), packed)


def boundary_matrix(complex_: SimplicialComplex, k: int) -> list[list[int]]:
    """Matrix of the boundary map C_k -> C_{k-1}; rows index (k-1)-simplices."""
    rows = complex_.simplices(k - 1)
    cols = complex_.simplices(k)
    index = {s: i for i, s in enumerate(rows)}
    m = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            if face:
                m[index[face]][j] = (-1) ** i
    return m


@dataclass(frozen=True)
class SNFResult:
    factors: tuple[int, ...]   # nonzero invariant factors d1 | d2 | ...
    rank: int
    rows: int
    cols: int


def smith_normal_form(matrix: list[list[int]]) -> SNFResult:
    """Exact integer Smith normal form by unimodular row/column moves."""
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    factors: list[int] = []
    top = 0
    while top < min(rows, cols):
        # pick the smallest nonzero entry as pivot
        pivot = None
        for i in range(top, rows):
            for j in range(top, cols):
                if m[i][j] != 0 and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[top], m[i] = m[i], m[top]
        for row in m:
            row[top], row[j] = row[j], row[top]
        # clear the pivot row and column; restart when a remainder appears
        dirty = True
        while dirty:
            dirty = False
            for i in range(top + 1, rows):
                if m[i][top]:
                    q = m[i][top] // m[top][top]
                    for j in range(top, cols):
                        m[i][j] -= q * m[top][j]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        dirty = True
            for j in range(top + 1, cols):
                if m[top][j]:
                    q = m[top][j] // m[top][top]
                    for i in range(top, rows):
                        m[i][j] -= q * m[i][top]
                    if m[top][j]:
                        for row in m:
                            row[top], row[j] = row[j], row[top]
                        dirty = True
        # divisibility: fold any non-multiple into the pivot's column
        d = abs(m[top][top])
        fixed = False
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if m[i][j] % d:
                    for col in range(top, cols):
                        m[top][col] += m[i][col]
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        factors.append(d)
        top += 1
    return SNFResult(tuple(factors), len(factors), rows, cols)


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...]   # invariant factors > 1, each dividing the next

    def render(self) -> str:
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology(p: Poset, max_elements: int = MAX_HOMOLOGY_ELEMENTS) -> list[HomologyGroup]:
    """Integer homology of the order complex, degrees 0 .. dim."""
    cx = order_complex(p, max_elements)
    groups = []
    for k in range(cx.dim + 1):
        n_k = len(cx.simplices(k))
        snf_k = smith_normal_form(boundary_matrix(cx, k)) if k > 0 else SNFResult((), 0, 0, n_k)
        snf_up = smith_normal_form(boundary_matrix(cx, k + 1))
        betti = n_k - snf_k.rank - snf_up.rank
        torsion = tuple(f for f in snf_up.factors if f > 1)
        groups.append(HomologyGroup(betti, torsion))
    return groups

"""Order complexes of posets and exact simplicial Betti numbers.

A k-simplex of the order complex is a strict chain of k+1 poset elements;
boundary matrices use alternating signs with vertices ordered by a fixed
linear extension, and ranks are computed exactly over GF(p) or the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .linalg import sparse_columns_rank
from .quiver import Quiver
from .reach import Poset, reachability_poset


@dataclass(frozen=True)
class SimplicialComplex:
    """Nondegenerate simplices grouped by dimension; closed under faces."""

    simplices: tuple[tuple[tuple[str, ...], ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))


def order_complex(p: Poset) -> SimplicialComplex:
    """All strict chains of the poset, grouped by length and enumerated in
    the order of a fixed linear extension."""
    # ascending count-below is a linear extension; ties broken by label
    below = {x: sum(1 for y in p.elements if p.less(y, x)) for x in p.elements}
    ext = sorted(p.elements, key=lambda x: (below[x], x))
    pos = {x: i for i, x in enumerate(ext)}
    succ = {x: [y for y in ext if p.less(x, y)] for x in ext}
    for x in ext:
        succ[x].sort(key=lambda y: pos[y])

    levels: list[list[tuple[str, ...]]] = []

    def grow(chain: list[str]):
        k = len(chain) - 1
        while len(levels) <= k:
            levels.append([])
        levels[k].append(tuple(chain))
        for y in succ[chain[-1]]:
            chain.append(y)
            grow(chain)
            chain.pop()

    for x in ext:
        grow([x])
    return SimplicialComplex(tuple(tuple(level) for level in levels))


def boundary_matrix(c: SimplicialComplex, k: int) -> list[dict[tuple[str, ...], int]]:
    """Columns of the boundary map from k-simplices to (k-1)-simplices."""
    if k <= 0 or k > c.dimension:
        return []
    cols = []
    for simplex in c.simplices[k]:
        col: dict[tuple[str, ...], int] = {}
        for i in range(len(simplex)):
            face = simplex[:i] + simplex[i + 1:]
            col[face] = col.get(face, 0) + (-1) ** i
        cols.append(col)
    return cols


def betti(c: SimplicialComplex, char: int = 2, max_dim: Optional[int] = None) -> tuple[int, ...]:
    """Betti numbers beta_0..beta_max_dim over GF(char) or the rationals
    (char = 0); degrees beyond the complex dimension are zero."""
    if max_dim is None:
        max_dim = max(c.dimension, 0)
    ranks = [sparse_columns_rank(boundary_matrix(c, k), char)
             for k in range(0, max_dim + 2)]
    out = []
    for k in range(max_dim + 1):
        f_k = c.f_vector[k] if k <= c.dimension else 0
        out.append(f_k - ranks[k] - ranks[k + 1])
    return tuple(out)


def nerve_betti_of_quiver(q: Quiver, char: int = 2, max_dim: Optional[int] = None) -> tuple[int, ...]:
    """Betti numbers of the nerve of the reachability category, computed as
    the order complex of the reachability poset."""
    poset, _ = reachability_poset(q)
    return betti(order_complex(poset), char, max_dim)

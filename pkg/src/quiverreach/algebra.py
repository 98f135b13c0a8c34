"""Commuting and incidence algebras: dimensions, structure constants, the
Happel degree-0/1 formula, Morita testing, global-dimension bounds, and a
small-scale Hochschild oracle on incidence algebras.

The commuting algebra of a quiver (path algebra modulo the parallel ideal)
has one basis element per reachable ordered pair of vertices; it is Morita
equivalent to the incidence algebra of the reachability poset, so Morita
equivalence is decided by poset isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .linalg import check_characteristic, sparse_columns_rank
from .quiver import (
    CyclicQuiverError,
    DisconnectedError,
    Quiver,
    QuiverError,
    count_paths_exact,
    diameter,
    is_acyclic,
    is_connected,
    reachability_closure,
)
from .reach import Poset, Preorder, contains_B11_subposet, poset_isomorphic, reachability_poset


class InvalidBasisElementError(QuiverError):
    pass


class TooLargeError(QuiverError):
    pass


class BadDegreeError(QuiverError):
    pass


MAX_ORACLE_DIM = 15   # admits every poset on up to five elements
MAX_ORACLE_DEGREE = 3


def commuting_algebra_dim(q: Quiver) -> int:
    """One basis morphism per reachable ordered pair, identities included."""
    return reachability_closure(q).true_count()


def incidence_algebra_dim(p: Poset) -> int:
    return p.true_count()


def structure_product(rel: Preorder, f: tuple[str, str], g: tuple[str, str]
                      ) -> Optional[tuple[str, str]]:
    """Basis product f*g = "first g, then f": (b,c)*(a,b) = (a,c), zero (None)
    when the endpoints do not match."""
    for pair in (f, g):
        a, b = pair
        if a not in rel.index or b not in rel.index or not rel.holds(a, b):
            raise InvalidBasisElementError(f"{pair!r} is not a basis element")
    b, c = f
    a, b2 = g
    if b2 != b:
        return None
    return (a, c)


class HappelHH:
    """Hochschild dimensions of the path algebra of a connected acyclic
    quiver: 1 in degree zero, the edge-path count formula in degree one,
    zero above."""

    def __init__(self, hh0: int, hh1: int):
        self.hh0 = hh0
        self.hh1 = hh1

    def dim(self, i: int) -> int:
        if i == 0:
            return self.hh0
        if i == 1:
            return self.hh1
        return 0


def happel_hh(q: Quiver) -> HappelHH:
    """Evaluate 1 - |V| + sum over edges of the number of directed paths from
    the edge's source to its target (exact big-integer counts)."""
    if not is_connected(q):
        raise DisconnectedError("Happel's formula needs a connected quiver")
    if not is_acyclic(q):
        raise CyclicQuiverError("Happel's formula needs an acyclic quiver")
    counts = count_paths_exact(q)
    total = sum(counts.get((e.src, e.dst), 0) for e in q.edges)
    return HappelHH(1, 1 - len(q.vertices) + total)


def morita_equivalent(q1: Quiver, q2: Quiver) -> tuple[bool, Optional[dict[str, str]]]:
    """Commuting algebras are Morita equivalent iff the reachability posets
    are isomorphic; the witness is the poset bijection."""
    p1, _ = reachability_poset(q1)
    p2, _ = reachability_poset(q2)
    witness = poset_isomorphic(p1, p2)
    return witness is not None, witness


@dataclass(frozen=True)
class GlDimReport:
    upper_bound: int          # diameter of the reachability quiver
    antichain: bool           # no nontrivial relation: semisimple, gl.dim 0
    is_one: Optional[bool]    # None when antichain; else "no diamond subposet"
    exact: Optional[int]      # 0 or 1 when determined, None otherwise

    def to_json_dict(self) -> dict:
        return {"upper_bound": self.upper_bound, "antichain": self.antichain,
                "is_one": self.is_one, "exact": self.exact}


def gldim_report(q: Quiver) -> GlDimReport:
    """Global dimension of the commuting algebra: bounded by the diameter;
    exactly one iff the reachability poset has a nontrivial relation and no
    diamond subposet; exactly zero on antichains."""
    poset, _ = reachability_poset(q)
    upper = diameter(q)
    nontrivial = any(a != b for a, b in poset.pairs())
    if not nontrivial:
        return GlDimReport(upper, True, None, 0)
    has_diamond, _ = contains_B11_subposet(poset)
    is_one = not has_diamond
    return GlDimReport(upper, False, is_one, 1 if is_one else None)


# ---------------------------------------------------------------------------
# Hochschild oracle (bar complex of the incidence algebra)


@lru_cache(maxsize=None)
def _bar_delta_rank(p: Poset, j: int, char: int) -> int:
    """Rank of the degree-j differential of the Hochschild cochain (bar)
    complex of the incidence algebra of ``p``."""
    basis = [(a, b) for a in p.elements for b in p.elements if p.holds(a, b)]

    def product(f, g):
        b, c = f
        a, b2 = g
        return (a, c) if b2 == b else None

    # s = (a, c) factors as (m, c) * (a, m) for every a <= m <= c
    factorizations = {
        s: [((m, s[1]), (s[0], m)) for m in p.elements
            if p.holds(s[0], m) and p.holds(m, s[1])]
        for s in basis
    }

    def columns():
        if j == 0:
            for t in basis:
                col: dict = {}
                for b in basis:
                    bt = product(b, t)
                    if bt is not None:
                        key = ((b,), bt)
                        col[key] = col.get(key, 0) + 1
                    tb = product(t, b)
                    if tb is not None:
                        key = ((b,), tb)
                        col[key] = col.get(key, 0) - 1
                yield col
            return

        from itertools import product as iproduct

        last_sign = (-1) ** (j + 1)
        for sigma in iproduct(basis, repeat=j):
            for t in basis:
                col = {}
                for b in basis:
                    bt = product(b, t)
                    if bt is not None:
                        key = ((b,) + sigma, bt)
                        col[key] = col.get(key, 0) + 1
                    tb = product(t, b)
                    if tb is not None:
                        key = (sigma + (b,), tb)
                        col[key] = col.get(key, 0) + last_sign
                for i in range(j):
                    sign = (-1) ** (i + 1)
                    for u, v in factorizations[sigma[i]]:
                        key = (sigma[:i] + (u, v) + sigma[i + 1:], t)
                        col[key] = col.get(key, 0) + sign
                yield {k: v for k, v in col.items() if v}

    return sparse_columns_rank(columns(), char)


def hochschild_oracle(p: Poset, k: int, char: int = 2) -> int:
    """Degree-k Hochschild Betti number of the incidence algebra of ``p``,
    from the standard bar complex with the structure-constant product.

    This is the dimension matched by the simplicial Betti numbers of the
    order complex (the classical simplicial/Hochschild comparison); it is
    computed on the algebra side only, with no reference to chains of the
    poset.
    """
    check_characteristic(char)
    if k < 0 or k > MAX_ORACLE_DEGREE:
        raise BadDegreeError(f"degree must be between 0 and {MAX_ORACLE_DEGREE}")
    d = incidence_algebra_dim(p)
    if d > MAX_ORACLE_DIM:
        raise TooLargeError(f"incidence algebra dimension {d} exceeds {MAX_ORACLE_DIM}")
    if d == 0:
        return 0
    dim_ck = d ** (k + 1)
    rank_out = _bar_delta_rank(p, k, char)
    rank_in = _bar_delta_rank(p, k - 1, char) if k > 0 else 0
    return dim_ck - rank_out - rank_in


@dataclass(frozen=True)
class AlgebraSummary:
    dimension: int
    hh0: Optional[int]
    hh1: Optional[int]
    gldim_upper: int
    gldim_is_one: Optional[bool]
    antichain: bool

    def to_json_dict(self) -> dict:
        return {"dimension": self.dimension, "hh0": self.hh0, "hh1": self.hh1,
                "gldim_upper": self.gldim_upper, "gldim_is_one": self.gldim_is_one,
                "antichain": self.antichain}


def summarize_algebra(q: Quiver) -> AlgebraSummary:
    """Dimension, Happel degrees (when applicable), and global-dimension
    report for the commuting algebra of ``q``."""
    report = gldim_report(q)
    try:
        hh = happel_hh(q)
        hh0, hh1 = hh.hh0, hh.hh1
    except (CyclicQuiverError, DisconnectedError):
        hh0 = hh1 = None
    return AlgebraSummary(commuting_algebra_dim(q), hh0, hh1,
                          report.upper_bound, report.is_one, report.antichain)

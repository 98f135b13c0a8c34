"""Reachability preorders, the reachability poset, and the reachability quiver.

The reachability preorder of a quiver has the vertices as elements and
"a path exists" as relation; collapsing mutually reachable vertices gives
the reachability poset.  Both are plain boolean relations here, so thinness
is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .quiver import (
    Edge,
    NotAMorphismError,
    Quiver,
    QuiverError,
    QuiverMorphism,
    _fresh_edge_id,
    condensation,
    quiver_isomorphic,
    reachability_closure,
    scc_partition,
    strip_loops,
    transitive_closure,
    validate_morphism,
)


@dataclass(frozen=True)
class Preorder:
    """Elements with a reflexive-transitive boolean relation."""

    elements: tuple[str, ...]
    relation: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        m = self.matrix
        n = len(self.elements)
        if m.shape != (n, n):
            raise QuiverError("relation shape does not match elements")
        if not m.diagonal().all():
            raise QuiverError("relation is not reflexive")
        if ((m @ m) & ~m).any():
            raise QuiverError("relation is not transitive")

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.array([[bool(x) for x in row] for row in self.relation], dtype=bool)
        m = m.reshape((len(self.elements), len(self.elements)))
        m.setflags(write=False)
        return m

    @cached_property
    def index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def holds(self, a: str, b: str) -> bool:
        return bool(self.matrix[self.index[a], self.index[b]])

    def pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.elements for b in self.elements if self.holds(a, b)]

    def true_count(self) -> int:
        return int(self.matrix.sum())


@dataclass(frozen=True)
class Poset(Preorder):
    """A preorder whose relation is additionally antisymmetric."""

    def __post_init__(self):
        super().__post_init__()
        m = self.matrix
        if (m & m.T & ~np.eye(len(self.elements), dtype=bool)).any():
            raise QuiverError("relation is not antisymmetric")

    def strict_pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for a, b in self.pairs() if a != b]

    def less(self, a: str, b: str) -> bool:
        return a != b and self.holds(a, b)

    def to_json_dict(self) -> dict:
        return {
            "elements": list(self.elements),
            "relation": [[bool(x) for x in row] for row in self.relation],
        }


def _rows(matrix: np.ndarray) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(bool(x) for x in row) for row in matrix)


def poset_from_pairs(elements, strict_pairs) -> Poset:
    """Build a poset from generating strict pairs (reflexive-transitive closure
    is taken; a cycle in the generators is rejected as non-antisymmetric)."""
    elements = tuple(str(x) for x in elements)
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    m = np.eye(n, dtype=bool)
    for a, b in strict_pairs:
        m[index[str(a)], index[str(b)]] = True
    for k in range(n):
        m |= np.outer(m[:, k], m[k, :])
    return Poset(elements, _rows(m))


def chain_poset(labels) -> Poset:
    labels = [str(x) for x in labels]
    return poset_from_pairs(labels, list(zip(labels, labels[1:])))


def antichain_poset(labels) -> Poset:
    return poset_from_pairs(labels, [])


# ---------------------------------------------------------------------------
# the reachability functor


def reach_preorder(q: Quiver) -> Preorder:
    reach = reachability_closure(q)
    return Preorder(q.vertices, _rows(reach.matrix))


def map_preorder(f: QuiverMorphism, src: Quiver, dst: Quiver) -> dict[str, str]:
    """The vertex map as a monotone map between the reachability preorders.

    Monotonicity is re-verified.  Note that the induced map on reachability
    posets is well defined, while the induced linear map on the category
    algebras need not be an algebra homomorphism (it is one exactly when the
    functor is injective on objects); inclusion of an edge into a pair of
    reciprocal edges is the standard counterexample.
    """
    check = validate_morphism(f, src, dst)
    if not check.ok:
        raise NotAMorphismError(f"square {check.side} fails at edge {check.edge!r}")
    pre_src = reach_preorder(src)
    pre_dst = reach_preorder(dst)
    mapping = {v: f.vertex_map[v] for v in src.vertices}
    for v, w in pre_src.pairs():
        if not pre_dst.holds(mapping[v], mapping[w]):
            raise NotAMorphismError(f"image map is not monotone at ({v!r}, {w!r})")
    return mapping


def reachability_poset(q: Quiver) -> tuple[Poset, dict[str, str]]:
    """The poset of strongly connected classes ordered by reachability, plus
    the quotient map vertex -> class label (class labels are the smallest
    vertex id of the block)."""
    blocks = scc_partition(q)
    reach = reachability_closure(q)
    reps = tuple(b[0] for b in blocks)
    n = len(reps)
    m = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            m[i, j] = reach.reaches(a, b)
    quotient = {v: b[0] for b in blocks for v in b}
    return Poset(reps, _rows(m)), quotient


def t_quiver(q: Quiver, strip_identity_loops: bool = False) -> Quiver:
    """The underlying quiver of the reachability poset: one edge per related
    pair of classes, including an identity loop at every class unless
    ``strip_identity_loops`` is set.

    The loop-free part is cross-checked against the condensation of the
    transitive closure, which it must match up to relabeling.
    """
    poset, _ = reachability_poset(q)
    used: set[str] = set()
    edges = []
    for a in poset.elements:
        for b in poset.elements:
            if poset.holds(a, b) and (a != b or not strip_identity_loops):
                edges.append(Edge(_fresh_edge_id(used, a, b), a, b))
    t = Quiver(poset.elements, tuple(edges))
    expected = strip_loops(condensation(transitive_closure(q)))
    if quiver_isomorphic(strip_loops(t), expected) is None:
        raise QuiverError("reachability quiver disagrees with condensed transitive closure")
    return t


# ---------------------------------------------------------------------------
# poset isomorphism and forbidden-subposet search


def _poset_invariants(p: Poset) -> dict[str, tuple]:
    below = {x: sum(1 for y in p.elements if p.less(y, x)) for x in p.elements}
    above = {x: sum(1 for y in p.elements if p.less(x, y)) for x in p.elements}
    up: dict[str, int] = {}
    down: dict[str, int] = {}
    # longest strict chains going up (resp. down) from each element; anything
    # above x has strictly fewer elements above it, so sorting by the counts
    # gives a valid evaluation order
    for x in sorted(p.elements, key=lambda x: above[x]):
        up[x] = max((1 + up[y] for y in p.elements if p.less(x, y)), default=0)
    for x in sorted(p.elements, key=lambda x: below[x]):
        down[x] = max((1 + down[y] for y in p.elements if p.less(y, x)), default=0)
    return {x: (below[x], above[x], down[x], up[x]) for x in p.elements}


def poset_isomorphic(p1: Poset, p2: Poset) -> Optional[dict[str, str]]:
    """An order isomorphism as a dict, or None.  Backtracking over element
    order with degree/height pruning; first witness is deterministic."""
    if len(p1.elements) != len(p2.elements):
        return None
    if p1.true_count() != p2.true_count():
        return None
    inv1, inv2 = _poset_invariants(p1), _poset_invariants(p2)
    if sorted(inv1.values()) != sorted(inv2.values()):
        return None

    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x: str, y: str) -> bool:
        if inv1[x] != inv2[y]:
            return False
        for a, b in mapping.items():
            if p1.holds(x, a) != p2.holds(y, b) or p1.holds(a, x) != p2.holds(b, y):
                return False
        return True

    def backtrack(k: int) -> bool:
        if k == len(p1.elements):
            return True
        x = p1.elements[k]
        for y in p2.elements:
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if backtrack(k + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    if backtrack(0):
        return dict(mapping)
    return None


class B11Witness(NamedTuple):
    x: str
    v: str
    w: str
    y: str


def contains_B11_subposet(p: Poset) -> tuple[bool, Optional[B11Witness]]:
    """Search for a diamond subposet: x < v < y and x < w < y with v, w
    incomparable.  Returns the first witness in element order."""
    els = p.elements
    for x in els:
        for iv, v in enumerate(els):
            if not p.less(x, v):
                continue
            for w in els[iv + 1:]:
                if not p.less(x, w) or p.less(v, w) or p.less(w, v):
                    continue
                for y in els:
                    if p.less(v, y) and p.less(w, y):
                        return True, B11Witness(x, v, w, y)
    return False, None

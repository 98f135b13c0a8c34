"""Finite quivers (directed multigraphs with loops) and elementary algorithms.

Vertex and edge identifiers are opaque strings; every function reports results
in terms of ids, never positional indices.  All values are immutable after
construction and every operation is a pure function.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional

import numpy as np


class QuiverError(Exception):
    pass


class ParseError(QuiverError):
    """Malformed QVR/FQVR/morphism document; carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CyclicQuiverError(QuiverError):
    pass


class DisconnectedError(QuiverError):
    pass


class NotAMorphismError(QuiverError):
    pass


class Edge(NamedTuple):
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Quiver:
    """A finite quiver: ordered vertex ids and an ordered list of edges.

    Loops and parallel edges are allowed; ids must be unique within their
    own kind and every edge endpoint must be a declared vertex.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise QuiverError(f"duplicate vertex id {v!r}")
            seen.add(v)
        eids = set()
        for e in self.edges:
            if e.id in eids:
                raise QuiverError(f"duplicate edge id {e.id!r}")
            eids.add(e.id)
            if e.src not in seen:
                raise QuiverError(f"edge {e.id!r} references undeclared vertex {e.src!r}")
            if e.dst not in seen:
                raise QuiverError(f"edge {e.id!r} references undeclared vertex {e.dst!r}")

    @staticmethod
    def build(vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> "Quiver":
        return Quiver(tuple(str(v) for v in vertices),
                      tuple(Edge(str(i), str(s), str(t)) for i, s, t in edges))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.dst].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges],
        }

    def to_qvr(self) -> str:
        lines = [f"v {v}" for v in self.vertices]
        lines += [f"e {e.id} {e.src} {e.dst}" for e in self.edges]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class Path:
    """A composable edge sequence; the empty sequence anchored at ``at`` is the
    identity path at that vertex.  Length counts edges."""

    edges: tuple[Edge, ...]
    at: Optional[str] = None

    def __post_init__(self):
        if not self.edges and self.at is None:
            raise QuiverError("empty path needs an anchor vertex")
        for a, b in zip(self.edges, self.edges[1:]):
            if a.dst != b.src:
                raise QuiverError(f"edges {a.id!r} and {b.id!r} are not composable")

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def source(self) -> str:
        return self.edges[0].src if self.edges else self.at  # type: ignore[return-value]

    @property
    def target(self) -> str:
        return self.edges[-1].dst if self.edges else self.at  # type: ignore[return-value]

    def vertex_sequence(self) -> tuple[str, ...]:
        if not self.edges:
            return (self.at,)  # type: ignore[return-value]
        return (self.edges[0].src,) + tuple(e.dst for e in self.edges)

    def is_simple(self) -> bool:
        seq = self.vertex_sequence()
        return len(set(seq)) == len(seq)

    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)


@dataclass(frozen=True)
class QuiverMorphism:
    """Total maps on vertex and edge ids; valid when both source/target
    squares commute for every edge."""

    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]


class MorphismCheck(NamedTuple):
    ok: bool
    edge: Optional[str]   # first offending edge id
    side: Optional[str]   # "source" or "target"


class ReachMatrix:
    """Reflexive-transitive boolean reachability matrix indexed by vertices.

    Entry (v, w) is true iff a (possibly empty) path v -> w exists.
    """

    def __init__(self, vertices: tuple[str, ...], matrix: np.ndarray):
        self.vertices = vertices
        self.matrix = matrix
        self.matrix.setflags(write=False)
        self._index = {v: i for i, v in enumerate(vertices)}

    def reaches(self, v: str, w: str) -> bool:
        return bool(self.matrix[self._index[v], self._index[w]])

    def true_count(self) -> int:
        return int(self.matrix.sum())

    def pairs(self) -> list[tuple[str, str]]:
        out = []
        for i, v in enumerate(self.vertices):
            for j, w in enumerate(self.vertices):
                if self.matrix[i, j]:
                    out.append((v, w))
        return out


class CountMatrix:
    """Saturated path-count matrix; diagonal counts the empty path."""

    def __init__(self, vertices: tuple[str, ...], matrix: np.ndarray, cap: int):
        self.vertices = vertices
        self.matrix = matrix
        self.cap = cap
        self._index = {v: i for i, v in enumerate(vertices)}

    def count(self, v: str, w: str) -> int:
        return int(self.matrix[self._index[v], self._index[w]])


# ---------------------------------------------------------------------------
# parsing and serialisation


def parse_quiver(text: str) -> Quiver:
    """Parse the QVR line format: ``# comment``, ``v <id>``, ``e <id> <src> <dst>``.

    Vertices and edges are kept in file order; an edge may reference a vertex
    declared anywhere in the document.
    """
    vertices: list[str] = []
    vset: set[str] = set()
    edges: list[Edge] = []
    eids: set[str] = set()
    edge_lines: list[tuple[int, Edge]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "v":
            if len(tokens) != 2:
                raise ParseError(lineno, f"expected 'v <id>', got {line!r}")
            if tokens[1] in vset:
                raise ParseError(lineno, f"duplicate vertex id {tokens[1]!r}")
            vertices.append(tokens[1])
            vset.add(tokens[1])
        elif tokens[0] == "e":
            if len(tokens) != 4:
                raise ParseError(lineno, f"expected 'e <id> <src> <dst>', got {line!r}")
            if tokens[1] in eids:
                raise ParseError(lineno, f"duplicate edge id {tokens[1]!r}")
            eids.add(tokens[1])
            e = Edge(tokens[1], tokens[2], tokens[3])
            edges.append(e)
            edge_lines.append((lineno, e))
        else:
            raise ParseError(lineno, f"unknown directive {tokens[0]!r}")
    for lineno, e in edge_lines:
        if e.src not in vset:
            raise ParseError(lineno, f"edge {e.id!r} references undeclared vertex {e.src!r}")
        if e.dst not in vset:
            raise ParseError(lineno, f"edge {e.id!r} references undeclared vertex {e.dst!r}")
    return Quiver(tuple(vertices), tuple(edges))


def parse_morphism(text: str) -> QuiverMorphism:
    """Parse the morphism line format: ``vm <src-id> <dst-id>``, ``em <src-edge> <dst-edge>``."""
    vm: dict[str, str] = {}
    em: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3 or tokens[0] not in ("vm", "em"):
            raise ParseError(lineno, f"expected 'vm <id> <id>' or 'em <id> <id>', got {line!r}")
        table = vm if tokens[0] == "vm" else em
        if tokens[1] in table:
            raise ParseError(lineno, f"duplicate mapping for {tokens[1]!r}")
        table[tokens[1]] = tokens[2]
    return QuiverMorphism(vm, em)


# ---------------------------------------------------------------------------
# morphisms


def validate_morphism(f: QuiverMorphism, src: Quiver, dst: Quiver) -> MorphismCheck:
    """Check both commuting squares for every edge of ``src``.

    Returns the first violated square (edge id plus "source"/"target").
    Raises if the maps are not total on ``src`` or land outside ``dst``;
    collapsing edges to loops is allowed.
    """
    for v in src.vertices:
        if v not in f.vertex_map:
            raise NotAMorphismError(f"vertex map undefined on {v!r}")
        if f.vertex_map[v] not in dst.index:
            raise NotAMorphismError(f"vertex map sends {v!r} outside the codomain")
    for e in src.edges:
        if e.id not in f.edge_map:
            raise NotAMorphismError(f"edge map undefined on {e.id!r}")
        if f.edge_map[e.id] not in dst.edge_by_id:
            raise NotAMorphismError(f"edge map sends {e.id!r} outside the codomain")
    for e in src.edges:
        img = dst.edge_by_id[f.edge_map[e.id]]
        if f.vertex_map[e.src] != img.src:
            return MorphismCheck(False, e.id, "source")
        if f.vertex_map[e.dst] != img.dst:
            return MorphismCheck(False, e.id, "target")
    return MorphismCheck(True, None, None)


def identity_morphism(q: Quiver) -> QuiverMorphism:
    return QuiverMorphism({v: v for v in q.vertices}, {e.id: e.id for e in q.edges})


def compose_morphisms(f: QuiverMorphism, g: QuiverMorphism) -> QuiverMorphism:
    """g after f (apply f first)."""
    return QuiverMorphism({v: g.vertex_map[w] for v, w in f.vertex_map.items()},
                          {e: g.edge_map[d] for e, d in f.edge_map.items()})


def path_image(f: QuiverMorphism, p: Path, dst: Quiver) -> Path:
    """Image of a path under a valid morphism (always a path again)."""
    if not p.edges:
        return Path((), at=f.vertex_map[p.at])  # type: ignore[index]
    return Path(tuple(dst.edge_by_id[f.edge_map[e.id]] for e in p.edges))


# ---------------------------------------------------------------------------
# reachability, components, condensation


def reachability_closure(q: Quiver) -> ReachMatrix:
    """Reflexive-transitive closure of the edge relation (BFS from every vertex)."""
    n = len(q.vertices)
    m = np.zeros((n, n), dtype=bool)
    idx = q.index
    for i, v in enumerate(q.vertices):
        m[i, i] = True
        stack = [v]
        while stack:
            u = stack.pop()
            for e in q.out_edges[u]:
                j = idx[e.dst]
                if not m[i, j]:
                    m[i, j] = True
                    stack.append(e.dst)
    return ReachMatrix(q.vertices, m)


def scc_partition(q: Quiver) -> list[tuple[str, ...]]:
    """Strongly connected components, each a sorted tuple with the smallest id
    first (the representative), blocks in a topological order of the condensation."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    blocks: list[tuple[str, ...]] = []

    for root in q.vertices:
        if root in index:
            continue
        # iterative Tarjan
        work = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter[0]
                counter[0] += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            out = q.out_edges[v]
            while ei < len(out):
                w = out[ei].dst
                ei += 1
                if w not in index:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                blocks.append(tuple(sorted(comp)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    # topological order of the block DAG, deterministic by smallest representative
    rep_of = {v: b[0] for b in blocks for v in b}
    block_by_rep = {b[0]: b for b in blocks}
    succs: dict[str, set[str]] = {b[0]: set() for b in blocks}
    indeg: dict[str, int] = {b[0]: 0 for b in blocks}
    for e in q.edges:
        a, b = rep_of[e.src], rep_of[e.dst]
        if a != b and b not in succs[a]:
            succs[a].add(b)
            indeg[b] += 1
    heap = [r for r in sorted(indeg) if indeg[r] == 0]
    heapq.heapify(heap)
    ordered: list[tuple[str, ...]] = []
    while heap:
        r = heapq.heappop(heap)
        ordered.append(block_by_rep[r])
        for s in sorted(succs[r]):
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(heap, s)
    return ordered


def _fresh_edge_id(used: set[str], src: str, dst: str) -> str:
    eid = f"{src}->{dst}"
    k = 2
    while eid in used:
        eid = f"{src}->{dst}#{k}"
        k += 1
    used.add(eid)
    return eid


def condensation(q: Quiver) -> Quiver:
    """Quiver of strongly connected components.

    Vertices are block representatives; there is one edge (X, Y) between
    distinct blocks whenever some edge of ``q`` crosses them, and a loop at a
    block that contains any internal edge (a collapsed directed cycle keeps
    its loop).  Parallel edges are never kept.
    """
    blocks = scc_partition(q)
    rep_of = {v: b[0] for b in blocks for v in b}
    pairs: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for e in q.edges:
        p = (rep_of[e.src], rep_of[e.dst])
        if p not in seen:
            seen.add(p)
            pairs.append(p)
    used: set[str] = set()
    edges = tuple(Edge(_fresh_edge_id(used, a, b), a, b) for a, b in pairs)
    return Quiver(tuple(b[0] for b in blocks), edges)


def transitive_closure(q: Quiver) -> Quiver:
    """Quiver with one edge (v, w) for every nonempty path v -> w in ``q``."""
    reach = reachability_closure(q)
    idx = q.index
    n = len(q.vertices)
    nonempty = np.zeros((n, n), dtype=bool)
    for e in q.edges:
        nonempty[idx[e.src]] |= reach.matrix[idx[e.dst]]
    used: set[str] = set()
    edges = []
    for i, v in enumerate(q.vertices):
        for j, w in enumerate(q.vertices):
            if nonempty[i, j]:
                edges.append(Edge(_fresh_edge_id(used, v, w), v, w))
    return Quiver(q.vertices, tuple(edges))


def strip_loops(q: Quiver) -> Quiver:
    return Quiver(q.vertices, tuple(e for e in q.edges if e.src != e.dst))


def is_acyclic(q: Quiver) -> bool:
    """No directed cycles; loops count as cycles."""
    if any(e.src == e.dst for e in q.edges):
        return False
    return all(len(b) == 1 for b in scc_partition(q))


def topological_order(q: Quiver) -> list[str]:
    if not is_acyclic(q):
        raise CyclicQuiverError("quiver has a directed cycle")
    return [b[0] for b in scc_partition(q)]


def count_paths_saturating(q: Quiver, cap: int = 2) -> CountMatrix:
    """Path counts saturated at ``cap``, by dynamic programming over a
    topological order; the diagonal counts the empty path."""
    if cap < 1:
        raise QuiverError("cap must be positive")
    order = topological_order(q)
    idx = q.index
    n = len(q.vertices)
    m = np.zeros((n, n), dtype=np.int64)
    for v in reversed(order):
        i = idx[v]
        m[i, i] = 1
        acc = np.zeros(n, dtype=np.int64)
        for e in q.out_edges[v]:
            acc += m[idx[e.dst]]
        acc = np.minimum(acc, cap)
        acc[i] = 1
        m[i] = acc
    return CountMatrix(q.vertices, m, cap)


def count_paths_exact(q: Quiver) -> dict[tuple[str, str], int]:
    """Exact (big-integer) path counts on an acyclic quiver; diagonal = 1."""
    order = topological_order(q)
    counts: dict[str, dict[str, int]] = {}
    for v in reversed(order):
        row: dict[str, int] = {v: 1}
        for e in q.out_edges[v]:
            for w, c in counts[e.dst].items():
                row[w] = row.get(w, 0) + c
        counts[v] = row
    return {(v, w): c for v in q.vertices for w, c in counts[v].items()}


def diameter(q: Quiver) -> int:
    """Longest directed simple path, in edges, of the loop-free reachability
    quiver (equivalently the longest strict chain between component classes)."""
    blocks = scc_partition(q)
    reps = [b[0] for b in blocks]
    reach = reachability_closure(q)
    # strict order on representatives; blocks are already topological
    longest: dict[str, int] = {}
    for r in reversed(reps):
        best = 0
        for s in longest:
            if s != r and reach.reaches(r, s):
                best = max(best, 1 + longest[s])
        longest[r] = best
    return max(longest.values(), default=0)


def undirected_components(q: Quiver) -> list[set[str]]:
    adj: dict[str, set[str]] = {v: set() for v in q.vertices}
    for e in q.edges:
        adj[e.src].add(e.dst)
        adj[e.dst].add(e.src)
    seen: set[str] = set()
    comps = []
    for v in q.vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def is_connected(q: Quiver) -> bool:
    return len(undirected_components(q)) <= 1


def quiver_isomorphic(q1: Quiver, q2: Quiver) -> Optional[dict[str, str]]:
    """Multigraph isomorphism on tiny quivers: a vertex bijection preserving
    edge multiplicities (loops and parallel edges included), or None."""
    if len(q1.vertices) != len(q2.vertices) or len(q1.edges) != len(q2.edges):
        return None

    def multiplicities(q: Quiver) -> dict[tuple[str, str], int]:
        out: dict[tuple[str, str], int] = {}
        for e in q.edges:
            out[(e.src, e.dst)] = out.get((e.src, e.dst), 0) + 1
        return out

    m1, m2 = multiplicities(q1), multiplicities(q2)

    def profile(q: Quiver, m: dict[tuple[str, str], int]):
        prof = {}
        for v in q.vertices:
            outd = sum(c for (a, _), c in m.items() if a == v)
            ind = sum(c for (_, b), c in m.items() if b == v)
            loops = m.get((v, v), 0)
            prof[v] = (outd, ind, loops)
        return prof

    p1, p2 = profile(q1, m1), profile(q2, m2)
    if sorted(p1.values()) != sorted(p2.values()):
        return None

    order = sorted(q1.vertices, key=lambda v: (p1[v], v))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v: str, w: str) -> bool:
        if p1[v] != p2[w]:
            return False
        for u, x in mapping.items():
            if m1.get((v, u), 0) != m2.get((w, x), 0):
                return False
            if m1.get((u, v), 0) != m2.get((x, w), 0):
                return False
        return m1.get((v, v), 0) == m2.get((w, w), 0)

    def backtrack(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for w in q2.vertices:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if backtrack(k + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if backtrack(0):
        return dict(mapping)
    return None

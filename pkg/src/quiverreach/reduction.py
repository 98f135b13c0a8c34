"""Path contraction and reduction, quasi-bigon search, and the decision
procedure for "path category equals reachability category".

A quasi-bigon is a pair of internally vertex-disjoint directed paths with the
same endpoints; a connected quiver has isomorphic path and reachability
categories exactly when it has no directed cycles and no quasi-bigons, which
is also when its path reduction is a simple alternating quiver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from .quiver import (
    CyclicQuiverError,
    DisconnectedError,
    Edge,
    Path,
    Quiver,
    QuiverError,
    count_paths_saturating,
    is_acyclic,
    is_connected,
    reachability_closure,
)


class NotSimpleError(QuiverError):
    pass


class NotMaximalError(QuiverError):
    pass


class LoopContractionError(QuiverError):
    pass


class InvalidOrderError(QuiverError):
    pass


class InvalidOccurrenceError(QuiverError):
    pass


@dataclass(frozen=True)
class QuasiBigon:
    """Two internally disjoint directed paths x -> y; ``upper`` is the one
    with the lexicographically smaller edge-id sequence."""

    x: str
    y: str
    upper: Path
    lower: Path

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "upper": list(self.upper.edge_ids()),
            "lower": list(self.lower.edge_ids()),
        }


class ReductionStep(NamedTuple):
    path: tuple[str, ...]     # edge ids of the recorded maximal simple path
    action: str               # "contracted" or "skipped"
    reason: Optional[str]     # why a member was skipped
    snapshot: int             # number of contractions performed so far

    def to_json_dict(self) -> dict:
        return {"path": list(self.path), "action": self.action,
                "reason": self.reason, "snapshot": self.snapshot}


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]

    def to_json_dict(self) -> list:
        return [s.to_json_dict() for s in self.steps]


class AlternatingCheck(NamedTuple):
    ok: bool
    sources: tuple[str, ...]
    sinks: tuple[str, ...]
    violation: Optional[str]


class PathReachResult(NamedTuple):
    isomorphic: bool
    certificate: Union[str, Path, QuasiBigon]

    def to_json_dict(self) -> dict:
        if isinstance(self.certificate, QuasiBigon):
            cert = {"type": "quasi_bigon", **self.certificate.to_json_dict()}
        elif isinstance(self.certificate, Path):
            cert = {"type": "cycle", "edges": list(self.certificate.edge_ids())}
        else:
            cert = self.certificate
        return {"isomorphic": self.isomorphic, "certificate": cert}


# ---------------------------------------------------------------------------
# maximal simple paths and contraction


def _simple_paths_from(q: Quiver, start: str):
    # DFS in declared edge order; yields edge tuples of length >= 1
    def extend(edges: list[Edge], visited: set[str]):
        last = edges[-1].dst
        for e in q.out_edges[last]:
            if e.dst in visited:
                continue
            edges.append(e)
            visited.add(e.dst)
            yield tuple(edges)
            yield from extend(edges, visited)
            visited.discard(e.dst)
            edges.pop()

    for e in q.out_edges[start]:
        if e.dst == start:
            continue
        yield (e,)
        yield from extend([e], {start, e.dst})


def _is_maximal(q: Quiver, edges: tuple[Edge, ...]) -> bool:
    verts = {edges[0].src} | {e.dst for e in edges}
    for e in q.in_edges[edges[0].src]:
        if e.src not in verts:
            return False
    for e in q.out_edges[edges[-1].dst]:
        if e.dst not in verts:
            return False
    return True


def maximal_simple_paths(q: Quiver) -> list[Path]:
    """All directed simple paths not properly contained in a longer simple
    path, ordered lexicographically by edge-id sequences.

    A simple path is maximal exactly when it cannot be extended by one edge
    at either end without repeating a vertex.
    """
    found = []
    for v in q.vertices:
        for edges in _simple_paths_from(q, v):
            if _is_maximal(q, edges):
                found.append(edges)
    found.sort(key=lambda es: tuple(e.id for e in es))
    return [Path(es) for es in found]


def contract_path(q: Quiver, g: Path) -> Quiver:
    """Contract all edges of a maximal simple path except the first one.

    Each contraction merges the edge's endpoints into the smaller id and
    rewires incident edges; loops arising from parallel structure are kept.
    """
    for e in g.edges:
        have = q.edge_by_id.get(e.id)
        if have is None or have != e:
            raise NotSimpleError(f"path edge {e.id!r} is not an edge of the quiver")
        if e.src == e.dst:
            raise LoopContractionError(f"cannot contract loop edge {e.id!r}")
    if not g.edges:
        return q
    if not g.is_simple():
        raise NotSimpleError("path repeats a vertex")
    if not _is_maximal(q, g.edges):
        raise NotMaximalError("path is properly contained in a longer simple path")

    resolve = {v: v for v in q.vertices}

    def find(v: str) -> str:
        while resolve[v] != v:
            resolve[v] = resolve[resolve[v]]
            v = resolve[v]
        return v

    removed = {e.id for e in g.edges[1:]}
    for e in g.edges[1:]:
        a, b = find(e.src), find(e.dst)
        if a == b:
            continue
        keep, gone = (a, b) if a < b else (b, a)
        resolve[gone] = keep

    vertices = tuple(v for v in q.vertices if find(v) == v)
    edges = tuple(Edge(e.id, find(e.src), find(e.dst))
                  for e in q.edges if e.id not in removed)
    return Quiver(vertices, edges)


def path_reduction(q: Quiver, order: Union[str, Sequence[Sequence[str]]] = "lex",
                   ) -> tuple[Quiver, ReductionTrace]:
    """Iterated contraction of every maximal simple path, in the given order.

    ``order`` is either "lex" or an explicit list of edge-id sequences that
    must cover exactly the maximal simple paths of ``q``.  After each
    contraction the images of the remaining members are recomputed; a member
    whose image is no longer a maximal simple path is skipped, and the trace
    records every decision.

    Merging vertices can make previously non-composable edges composable, so
    one sweep over the original members does not always remove every simple
    path of length two; sweeps repeat (in lexicographic order) until no
    contraction merges vertices.  The result has no simple paths of length
    >= 2 and hence no directed simple cycles of length >= 3.
    """
    members = [p.edge_ids() for p in maximal_simple_paths(q)]
    if order != "lex":
        given = [tuple(str(i) for i in seq) for seq in order]
        if sorted(given) != sorted(members):
            raise InvalidOrderError("order must cover exactly the maximal simple paths")
        members = given

    current = q
    snapshot = 0
    steps: list[ReductionStep] = []

    def sweep(member_list: list[tuple[str, ...]]) -> bool:
        nonlocal current, snapshot
        merged = False
        for member in member_list:
            surviving = [current.edge_by_id[i] for i in member if i in current.edge_by_id]
            if not surviving:
                steps.append(ReductionStep(member, "skipped", "vanished", snapshot))
                continue
            if any(a.dst != b.src for a, b in zip(surviving, surviving[1:])):
                steps.append(ReductionStep(member, "skipped", "no longer a path", snapshot))
                continue
            image = Path(tuple(surviving))
            if not image.is_simple():
                steps.append(ReductionStep(member, "skipped", "not simple", snapshot))
                continue
            if not _is_maximal(current, image.edges):
                steps.append(ReductionStep(member, "skipped", "not maximal", snapshot))
                continue
            current = contract_path(current, image)
            snapshot += 1
            merged = merged or image.length >= 2
            steps.append(ReductionStep(member, "contracted", None, snapshot))
        return merged

    progressed = sweep(members)
    while progressed:
        # a sweep that merged nothing saw only single-edge maximal paths,
        # which is exactly the fixpoint
        progressed = sweep([p.edge_ids() for p in maximal_simple_paths(current)])
    return current, ReductionTrace(tuple(steps))


# ---------------------------------------------------------------------------
# alternating quivers


def is_simple_alternating(q: Quiver) -> AlternatingCheck:
    """True iff the quiver has no loops, no parallel edges, and every vertex
    is a pure source or a pure sink; isolated vertices join the sources."""
    seen_pairs: set[tuple[str, str]] = set()
    for e in q.edges:
        if e.src == e.dst:
            return AlternatingCheck(False, (), (), f"loop {e.id}")
        if (e.src, e.dst) in seen_pairs:
            return AlternatingCheck(False, (), (), f"parallel edges {e.src}->{e.dst}")
        seen_pairs.add((e.src, e.dst))
    sources, sinks = [], []
    for v in q.vertices:
        ind, outd = len(q.in_edges[v]), len(q.out_edges[v])
        if ind > 0 and outd > 0:
            return AlternatingCheck(False, (), (), f"vertex {v} has both in- and out-edges")
        (sinks if ind > 0 else sources).append(v)
    return AlternatingCheck(True, tuple(sources), tuple(sinks), None)


# ---------------------------------------------------------------------------
# quasi-bigons


class _Arc:
    __slots__ = ("head", "cap", "flow", "rev", "edge_id")

    def __init__(self, head, cap, edge_id=None):
        self.head = head
        self.cap = cap
        self.flow = 0
        self.rev: "_Arc" = None  # type: ignore[assignment]
        self.edge_id = edge_id


def _two_disjoint_paths(q: Quiver, x: str, y: str) -> Optional[tuple[tuple[Edge, ...], tuple[Edge, ...]]]:
    """Two internally vertex-disjoint x -> y paths via a unit-capacity flow on
    the vertex-split graph, or None if the max flow is below 2."""
    adj: dict[tuple[str, str], list[_Arc]] = {}

    def node(kind: str, v: str) -> tuple[str, str]:
        key = (kind, v)
        adj.setdefault(key, [])
        return key

    def arc(u, v, cap, edge_id=None):
        fwd = _Arc(v, cap, edge_id)
        bwd = _Arc(u, 0)
        fwd.rev, bwd.rev = bwd, fwd
        adj[u].append(fwd)
        adj[v].append(bwd)

    for v in q.vertices:
        node("in", v)
        node("out", v)
        if v != x and v != y:
            arc(("in", v), ("out", v), 1)
    for e in q.edges:
        if e.src == e.dst:
            continue
        arc(("out", e.src), ("in", e.dst), 1, e.id)

    source, sink = ("out", x), ("in", y)
    flow = 0
    for _ in range(2):
        # BFS augmentation over the residual graph
        prev: dict[tuple[str, str], _Arc] = {}
        queue = [source]
        seen = {source}
        while queue:
            nxt = []
            for u in queue:
                for a in adj[u]:
                    if a.cap - a.flow > 0 and a.head not in seen:
                        seen.add(a.head)
                        prev[a.head] = a
                        nxt.append(a.head)
            queue = nxt
        if sink not in seen:
            break
        node_ = sink
        while node_ != source:
            a = prev[node_]
            a.flow += 1
            a.rev.flow -= 1
            node_ = a.rev.head
        flow += 1
    if flow < 2:
        return None

    paths = []
    for _ in range(2):
        edges: list[Edge] = []
        u = source
        while u != sink:
            chosen = None
            for a in adj[u]:
                if a.cap > 0 and a.flow > 0:
                    if chosen is None or (a.edge_id or "") < (chosen.edge_id or ""):
                        chosen = a
            assert chosen is not None
            chosen.flow -= 1
            if chosen.edge_id is not None:
                edges.append(q.edge_by_id[chosen.edge_id])
            u = chosen.head
        paths.append(tuple(edges))
    paths.sort(key=lambda es: tuple(e.id for e in es))
    return paths[0], paths[1]


def find_quasi_bigon(q: Quiver) -> Optional[QuasiBigon]:
    """First quasi-bigon occurrence in lexicographic (x, y) order, or None."""
    for x in q.vertices:
        for y in q.vertices:
            if x == y:
                continue
            found = _two_disjoint_paths(q, x, y)
            if found is not None:
                return QuasiBigon(x, y, Path(found[0]), Path(found[1]))
    return None


def _check_occurrence(q: Quiver, b: QuasiBigon) -> None:
    for p in (b.upper, b.lower):
        if not p.edges:
            raise InvalidOccurrenceError("occurrence paths must have length >= 1")
        for e in p.edges:
            if q.edge_by_id.get(e.id) != e:
                raise InvalidOccurrenceError(f"edge {e.id!r} is not an edge of the quiver")
        if p.source != b.x or p.target != b.y:
            raise InvalidOccurrenceError("occurrence paths must run x -> y")
        if not p.is_simple():
            raise InvalidOccurrenceError("occurrence paths must be simple")
    if b.x == b.y:
        raise InvalidOccurrenceError("endpoints must be distinct")
    if b.upper.edge_ids() == b.lower.edge_ids():
        raise InvalidOccurrenceError("occurrence paths must differ")
    upper_inner = set(b.upper.vertex_sequence()[1:-1])
    lower_inner = set(b.lower.vertex_sequence()[1:-1])
    if upper_inner & lower_inner:
        raise InvalidOccurrenceError("occurrence paths share an internal vertex")


def has_diagonal(q: Quiver, b: QuasiBigon) -> bool:
    """True iff a directed path y -> x exists; by construction this is the
    same as the occurrence's vertex set being strongly connected in ``q``,
    which is cross-checked."""
    _check_occurrence(q, b)
    reach = reachability_closure(q)
    diagonal = reach.reaches(b.y, b.x)
    verts = set(b.upper.vertex_sequence()) | set(b.lower.vertex_sequence())
    strongly = all(reach.reaches(u, w) for u in verts for w in verts)
    if strongly != diagonal:
        raise QuiverError("diagonal criterion disagrees with strong connectivity")
    return diagonal


# ---------------------------------------------------------------------------
# Path vs Reach decision


def _find_cycle(q: Quiver) -> Optional[Path]:
    reach = reachability_closure(q)
    for e in q.edges:
        if e.src == e.dst:
            return Path((e,))
        if reach.reaches(e.dst, e.src):
            # shortest path e.dst -> e.src by BFS, then close up with e
            prev: dict[str, Edge] = {}
            queue = [e.dst]
            seen = {e.dst}
            while queue:
                nxt = []
                for u in queue:
                    for f in q.out_edges[u]:
                        if f.dst not in seen:
                            seen.add(f.dst)
                            prev[f.dst] = f
                            nxt.append(f.dst)
                queue = nxt
            back: list[Edge] = []
            v = e.src
            while v != e.dst:
                back.append(prev[v])
                v = prev[v].src
            return Path((e,) + tuple(reversed(back)))
    return None


def _two_paths(q: Quiver, v: str, w: str) -> list[tuple[Edge, ...]]:
    # first two v -> w paths in DFS order (acyclic quiver)
    out: list[tuple[Edge, ...]] = []

    def walk(u: str, acc: list[Edge]):
        if len(out) == 2:
            return
        if u == w and acc:
            out.append(tuple(acc))
            return
        if u == w:
            out.append(())
            return
        for e in q.out_edges[u]:
            acc.append(e)
            walk(e.dst, acc)
            acc.pop()
            if len(out) == 2:
                return

    walk(v, [])
    return out


def _extract_quasi_bigon(p1: tuple[Edge, ...], p2: tuple[Edge, ...]) -> QuasiBigon:
    """Clip two distinct paths with common endpoints (in an acyclic quiver) to
    their first divergence / first reconvergence window."""
    i = 0
    while i < min(len(p1), len(p2)) and p1[i] == p2[i]:
        i += 1
    x = p1[i].src
    tail1 = [e.dst for e in p1[i:]]
    tail2 = [e.dst for e in p2[i:]]
    in_tail2 = set(tail2)
    y = next(v for v in tail1 if v in in_tail2)
    seg1 = p1[i: i + tail1.index(y) + 1]
    seg2 = p2[i: i + tail2.index(y) + 1]
    upper, lower = sorted((seg1, seg2), key=lambda es: tuple(e.id for e in es))
    return QuasiBigon(x, y, Path(upper), Path(lower))


def path_reach_isomorphic(q: Quiver) -> PathReachResult:
    """Decide whether the path category and the reachability category agree:
    true iff the connected quiver has no directed cycle (loops included) and
    no quasi-bigon.  The certificate is a directed cycle, a quasi-bigon
    occurrence, or the string "isomorphic"."""
    if not is_connected(q):
        raise DisconnectedError("quiver is not connected as an undirected graph")
    cycle = _find_cycle(q)
    if cycle is not None:
        return PathReachResult(False, cycle)
    counts = count_paths_saturating(q, cap=2)
    for v in q.vertices:
        for w in q.vertices:
            if v != w and counts.count(v, w) >= 2:
                p1, p2 = _two_paths(q, v, w)
                return PathReachResult(False, _extract_quasi_bigon(p1, p2))
    return PathReachResult(True, "isomorphic")

"""Deterministic generators for randomized property checks and exhaustive
small-case sweeps.  Every function takes an explicit ``random.Random`` so the
self-test subcommand and the test suite stay reproducible."""

from __future__ import annotations

import itertools
from random import Random
from typing import Iterator, Optional

from .quiver import Edge, Quiver, count_paths_saturating, is_acyclic, is_connected
from .reach import Poset, poset_from_pairs


def random_quiver(rng: Random, max_vertices: int = 6, max_edges: int = 8,
                  allow_loops: bool = True, min_vertices: int = 1) -> Quiver:
    n = rng.randint(min_vertices, max_vertices)
    vertices = tuple(str(i) for i in range(n))
    m = rng.randint(0, max_edges)
    edges = []
    for i in range(m):
        src = rng.choice(vertices)
        dst = rng.choice(vertices)
        if not allow_loops:
            while dst == src:
                dst = rng.choice(vertices)
        edges.append(Edge(f"e{i}", src, dst))
    return Quiver(vertices, tuple(edges))


def random_connected_quiver(rng: Random, max_vertices: int = 6, max_edges: int = 8,
                            allow_loops: bool = True) -> Quiver:
    while True:
        q = random_quiver(rng, max_vertices, max_edges, allow_loops)
        if is_connected(q):
            return q


def random_strongly_connected_quiver(rng: Random, max_vertices: int = 7) -> Quiver:
    """A spanning directed cycle through all vertices plus random extras."""
    n = rng.randint(1, max_vertices)
    vertices = [str(i) for i in range(n)]
    rng.shuffle(vertices)
    edges = []
    if n > 1:
        for i in range(n):
            edges.append(Edge(f"c{i}", vertices[i], vertices[(i + 1) % n]))
    elif rng.random() < 0.5:
        edges.append(Edge("c0", vertices[0], vertices[0]))
    for i in range(rng.randint(0, n)):
        edges.append(Edge(f"x{i}", rng.choice(vertices), rng.choice(vertices)))
    return Quiver(tuple(sorted(vertices)), tuple(edges))


def random_dag_quiver(rng: Random, max_vertices: int = 6, max_edges: int = 8) -> Quiver:
    """Acyclic by construction: edges only go up in a hidden vertex order."""
    n = rng.randint(2, max_vertices)
    vertices = tuple(str(i) for i in range(n))
    edges = []
    for i in range(rng.randint(0, max_edges)):
        a, b = rng.sample(range(n), 2)
        if a > b:
            a, b = b, a
        edges.append(Edge(f"e{i}", vertices[a], vertices[b]))
    return Quiver(vertices, tuple(edges))


def random_unique_path_quiver(rng: Random, max_vertices: int = 6) -> Quiver:
    """Connected, acyclic, and at most one directed path between any two
    vertices (no quasi-bigons); found by rejection from sparse DAGs."""
    while True:
        n = rng.randint(2, max_vertices)
        q = random_dag_quiver(rng, max_vertices=n, max_edges=n + 1)
        if len(q.vertices) != n or not is_connected(q):
            continue
        counts = count_paths_saturating(q, cap=2)
        if all(counts.count(v, w) <= 1 for v in q.vertices for w in q.vertices if v != w):
            return q


def relabel_quiver(q: Quiver, vertex_map: dict[str, str],
                   edge_map: Optional[dict[str, str]] = None) -> Quiver:
    edge_map = edge_map or {}
    return Quiver(tuple(vertex_map[v] for v in q.vertices),
                  tuple(Edge(edge_map.get(e.id, e.id), vertex_map[e.src], vertex_map[e.dst])
                        for e in q.edges))


def random_relabel(rng: Random, q: Quiver) -> Quiver:
    """Shuffle vertex/edge order and rename everything."""
    perm = list(q.vertices)
    rng.shuffle(perm)
    vmap = {v: f"n{i}" for i, v in zip(range(len(perm)), perm)}
    emap = {e.id: f"m{i}" for i, e in enumerate(q.edges)}
    new = relabel_quiver(q, vmap, emap)
    order = list(new.vertices)
    rng.shuffle(order)
    edges = list(new.edges)
    rng.shuffle(edges)
    return Quiver(tuple(order), tuple(edges))


def all_tiny_quivers(max_vertices: int, max_edges: int) -> Iterator[Quiver]:
    """Every quiver (up to edge naming) on at most ``max_vertices`` labeled
    vertices with at most ``max_edges`` edges, parallels and loops included."""
    for n in range(max_vertices + 1):
        vertices = tuple(str(i) for i in range(n))
        pairs = [(a, b) for a in vertices for b in vertices]
        for m in range(max_edges + 1):
            if m > 0 and n == 0:
                break
            for combo in itertools.combinations_with_replacement(pairs, m):
                edges = tuple(Edge(f"e{i}", a, b) for i, (a, b) in enumerate(combo))
                yield Quiver(vertices, edges)


def all_posets_upto_iso(max_elements: int) -> list[Poset]:
    """Every poset with at most ``max_elements`` elements, one labeled
    representative per isomorphism class.

    Generation adds elements as maximal one at a time (each new element
    covers a down-closed subset), which produces every naturally labeled
    poset; classes are then deduplicated by canonical relabeling.
    """
    out: list[Poset] = []
    for n in range(1, max_elements + 1):
        seen: set[tuple] = set()
        for below in _natural_posets(n):
            canon = _canonical_strict_pairs(below, n)
            if canon in seen:
                continue
            seen.add(canon)
            labels = [str(i) for i in range(n)]
            pairs = [(str(j), str(i)) for i in range(n) for j in range(n)
                     if below[i] >> j & 1]
            out.append(poset_from_pairs(labels, pairs))
    return out


def _natural_posets(n: int) -> Iterator[list[int]]:
    # below[i] = bitmask of elements strictly below i; labels form a linear extension
    def extend(below: list[int]) -> Iterator[list[int]]:
        k = len(below)
        if k == n:
            yield below
            return
        for subset in range(1 << k):
            if all(below[i] & ~subset == 0 for i in range(k) if subset >> i & 1):
                yield from extend(below + [subset])

    yield from extend([])


def _canonical_strict_pairs(below: list[int], n: int) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        pairs = tuple(sorted((perm[j], perm[i]) for i in range(n)
                             for j in range(n) if below[i] >> j & 1))
        if best is None or pairs < best:
            best = pairs
    return best  # type: ignore[return-value]

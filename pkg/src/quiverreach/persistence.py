"""Filtered quivers and persistent Hochschild Betti curves.

A filtration assigns an exact decimal value to every vertex and edge, with
each edge appearing no earlier than its endpoints.  The curve evaluates the
nerve Betti numbers of the reachability poset at every critical value; this
matches the Hochschild Betti numbers of the incidence algebras by Morita
invariance.  Only the curve is produced: the collapse of strongly connected
classes prevents a consistent basis across thresholds (the induced maps need
not be algebra homomorphisms), so no persistence diagram is defined.  When
every sublevel quiver is acyclic no collapse happens and the pipeline is
genuinely functorial, which the curve records as a flag.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Mapping, Optional

from .homology import nerve_betti_of_quiver
from .quiver import Edge, ParseError, Quiver, QuiverError, is_acyclic


class NonMonotoneError(QuiverError):
    def __init__(self, edge_id: str, message: str):
        super().__init__(message)
        self.edge_id = edge_id


@dataclass(frozen=True)
class FilteredQuiver:
    """A quiver with an exact decimal filtration value per vertex and edge;
    every edge value is at least the values of its endpoints."""

    quiver: Quiver
    vertex_values: Mapping[str, Decimal]
    edge_values: Mapping[str, Decimal]

    def __post_init__(self):
        for v in self.quiver.vertices:
            if v not in self.vertex_values:
                raise QuiverError(f"missing filtration value for vertex {v!r}")
        for e in self.quiver.edges:
            if e.id not in self.edge_values:
                raise QuiverError(f"missing filtration value for edge {e.id!r}")
            t = self.edge_values[e.id]
            bound = max(self.vertex_values[e.src], self.vertex_values[e.dst])
            if t < bound:
                raise NonMonotoneError(
                    e.id, f"edge {e.id!r} appears at {t} before its endpoints ({bound})")

    def critical_values(self) -> tuple[Decimal, ...]:
        values = set(self.vertex_values.values()) | set(self.edge_values.values())
        return tuple(sorted(values))


def parse_filtration(text: str) -> FilteredQuiver:
    """Parse the FQVR line format: ``v <id> <t>``, ``e <id> <src> <dst> <t>``."""
    vertices: list[str] = []
    edges: list[Edge] = []
    vvals: dict[str, Decimal] = {}
    evals: dict[str, Decimal] = {}

    def decimal(lineno: int, token: str) -> Decimal:
        try:
            return Decimal(token)
        except InvalidOperation:
            raise ParseError(lineno, f"bad filtration value {token!r}") from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "v" and len(tokens) == 3:
            if tokens[1] in vvals:
                raise ParseError(lineno, f"duplicate vertex id {tokens[1]!r}")
            vertices.append(tokens[1])
            vvals[tokens[1]] = decimal(lineno, tokens[2])
        elif tokens[0] == "e" and len(tokens) == 5:
            if tokens[1] in evals:
                raise ParseError(lineno, f"duplicate edge id {tokens[1]!r}")
            edges.append(Edge(tokens[1], tokens[2], tokens[3]))
            evals[tokens[1]] = decimal(lineno, tokens[4])
        else:
            raise ParseError(lineno, f"expected 'v <id> <t>' or 'e <id> <src> <dst> <t>', got {line!r}")
    try:
        quiver = Quiver(tuple(vertices), tuple(edges))
    except QuiverError as exc:
        raise ParseError(0, str(exc)) from None
    return FilteredQuiver(quiver, vvals, evals)


def sublevel(fq: FilteredQuiver, t) -> Quiver:
    """The subquiver on vertices and edges with value <= t."""
    t = Decimal(t)
    vertices = tuple(v for v in fq.quiver.vertices if fq.vertex_values[v] <= t)
    edges = tuple(e for e in fq.quiver.edges if fq.edge_values[e.id] <= t)
    return Quiver(vertices, edges)


@dataclass(frozen=True)
class BettiCurve:
    """Betti vectors at every critical value, zero-padded to a common length
    and constant between criticals."""

    thresholds: tuple[Decimal, ...]
    vectors: tuple[tuple[int, ...], ...]
    functorial: bool   # every sublevel acyclic: no class collapse anywhere

    def degrees(self) -> int:
        return len(self.vectors[0]) if self.vectors else 0

    def to_csv(self) -> str:
        header = "t," + ",".join(f"beta{k}" for k in range(self.degrees()))
        rows = [f"{t}," + ",".join(str(b) for b in vec)
                for t, vec in zip(self.thresholds, self.vectors)]
        return "\n".join([header] + rows) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "thresholds": [str(t) for t in self.thresholds],
            "betti": [list(v) for v in self.vectors],
            "functorial": self.functorial,
        }

    def to_gnuplot(self) -> str:
        lines = [
            "set xlabel 't'",
            "set ylabel 'Betti number'",
            "set key outside",
            "plot " + ", ".join(
                f"'-' using 1:2 with steps title 'beta{k}'" for k in range(self.degrees())),
        ]
        for k in range(self.degrees()):
            for t, vec in zip(self.thresholds, self.vectors):
                lines.append(f"{t} {vec[k]}")
            lines.append("e")
        return "\n".join(lines) + "\n"


def hh_betti_curves(fq: FilteredQuiver, char: int = 2, max_dim: Optional[int] = None,
                    jobs: Optional[int] = None) -> BettiCurve:
    """Evaluate the nerve Betti numbers of every sublevel quiver at every
    critical value.  Thresholds are independent pure computations and run on
    a small thread pool; output order is by threshold regardless."""
    criticals = fq.critical_values()
    quivers = [sublevel(fq, t) for t in criticals]

    def evaluate(q: Quiver) -> tuple[int, ...]:
        return nerve_betti_of_quiver(q, char, max_dim)

    if jobs == 1 or len(quivers) <= 1:
        raw = [evaluate(q) for q in quivers]
    else:
        workers = jobs if jobs else min(4, max(1, len(quivers)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(evaluate, quivers))

    width = max((len(v) for v in raw), default=0)
    vectors = tuple(tuple(v) + (0,) * (width - len(v)) for v in raw)
    functorial = all(is_acyclic(q) for q in quivers)
    return BettiCurve(criticals, vectors, functorial)

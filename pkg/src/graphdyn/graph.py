"""Metric topological graphs and points on them.

Edges are parameterized by ``t`` in ``[0, 1]`` running from the edge's
``u`` end to its ``v`` end; arclength along an edge is ``t * length``.
Everything is exact: coordinates and lengths are ``Fraction``.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

from .errors import DisconnectedGraph, GraphError, NonpositiveEdgeLength


@dataclass(frozen=True, order=True)
class Vertex:
    id: str

    def __str__(self):
        return self.id


@dataclass(frozen=True, order=True)
class EdgePoint:
    """A point strictly inside an edge, ``0 < t < 1``."""

    edge: str
    t: Fraction

    def __str__(self):
        return f"{self.edge}:{self.t}"


GraphPoint = Union[Vertex, EdgePoint]


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Fraction

    def end_vertex(self, end):
        return self.u if end == 0 else self.v


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or 'p/q' string")
    return Fraction(x)


class Graph:
    """A finite metric graph.

    ``origin`` maps every edge to ``(raw_edge, c0, c1)``: the sub-segment of
    an edge of ``raw`` it was cut from.  For graphs that were never
    subdivided ``raw is self`` and ``c0, c1 == 0, 1``.
    """

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple], synthetic=(),
                 raw: "Graph | None" = None, origin: dict | None = None):
        self.vertices: tuple[str, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        vset = set(self.vertices)
        self.edges: dict[str, Edge] = {}
        for eid, u, v, length in edges:
            if eid in self.edges:
                raise GraphError(f"duplicate edge id {eid!r}")
            if u not in vset or v not in vset:
                raise GraphError(f"edge {eid!r} uses an undeclared vertex")
            length = as_fraction(length)
            if length <= 0:
                raise NonpositiveEdgeLength(f"edge {eid!r} has length {length}")
            self.edges[eid] = Edge(eid, u, v, length)
        self.synthetic = frozenset(synthetic)
        self.raw = raw if raw is not None else self
        self.origin = origin if origin is not None else {
            e: (e, Fraction(0), Fraction(1)) for e in self.edges}
        self.edge_order = {e: i for i, e in enumerate(self.edges)}
        self.vertex_order = {v: i for i, v in enumerate(self.vertices)}
        inc = defaultdict(list)
        for e in self.edges.values():
            inc[e.u].append((e.id, 0))
            inc[e.v].append((e.id, 1))
        self.incident: dict[str, tuple[tuple[str, int], ...]] = {
            v: tuple(inc[v]) for v in self.vertices}

    # structural identity ------------------------------------------------

    def _key(self):
        return (self.vertices, tuple(self.edges.values()), self.synthetic)

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # points -------------------------------------------------------------

    def point(self, edge: str, t) -> GraphPoint:
        """Canonical point at coordinate ``t`` of ``edge``."""
        t = as_fraction(t)
        if not 0 <= t <= 1:
            raise ValueError(f"coordinate {t} outside [0, 1]")
        e = self.edges[edge]
        if t == 0:
            return Vertex(e.u)
        if t == 1:
            return Vertex(e.v)
        return EdgePoint(edge, t)

    def vertex(self, vid: str) -> Vertex:
        if vid not in self.vertex_order:
            raise KeyError(vid)
        return Vertex(vid)

    def coords(self, x: GraphPoint) -> tuple[str, Fraction]:
        """Some ``(edge, t)`` representing ``x``."""
        if isinstance(x, EdgePoint):
            return x.edge, x.t
        edge, end = self.incident[x.id][0]
        return edge, Fraction(end)

    def from_raw(self, raw_edge: str, t) -> GraphPoint:
        """Translate a coordinate on the unsubdivided graph into this graph."""
        t = as_fraction(t)
        for e, (re, c0, c1) in self.origin.items():
            if re == raw_edge and c0 <= t <= c1:
                return self.point(e, (t - c0) / (c1 - c0))
        raise KeyError(raw_edge)

    def ends(self, x: GraphPoint) -> list[tuple[str, Fraction]]:
        """Vertices through which ``x`` is left, with the distance to each."""
        if isinstance(x, Vertex):
            return [(x.id, Fraction(0))]
        e = self.edges[x.edge]
        return [(e.u, x.t * e.length), (e.v, (1 - x.t) * e.length)]

    # metric -------------------------------------------------------------

    @cached_property
    def vertex_distances(self) -> dict[str, dict[str, Fraction]]:
        """All-pairs shortest path lengths between vertices (Floyd-Warshall)."""
        inf = None
        d = {a: {b: (Fraction(0) if a == b else inf) for b in self.vertices} for a in self.vertices}
        for e in self.edges.values():
            for a, b in ((e.u, e.v), (e.v, e.u)):
                if d[a][b] is None or e.length < d[a][b]:
                    d[a][b] = e.length
        for k in self.vertices:
            dk = d[k]
            for i in self.vertices:
                dik = d[i][k]
                if dik is None:
                    continue
                di = d[i]
                for j in self.vertices:
                    dkj = dk[j]
                    if dkj is None:
                        continue
                    s = dik + dkj
                    if di[j] is None or s < di[j]:
                        di[j] = s
        return d

    def distance(self, x: GraphPoint, y: GraphPoint) -> Fraction:
        """Shortest-path (arclength) distance."""
        if x == y:
            return Fraction(0)
        dv = self.vertex_distances
        best = min(dx + dv[a][b] + dy for a, dx in self.ends(x) for b, dy in self.ends(y))
        if isinstance(x, EdgePoint) and isinstance(y, EdgePoint) and x.edge == y.edge:
            best = min(best, abs(x.t - y.t) * self.edges[x.edge].length)
        return best

    @cached_property
    def diameter(self) -> Fraction:
        """Upper bound for every pairwise distance (total length)."""
        return sum((e.length for e in self.edges.values()), Fraction(0))

    # valence ------------------------------------------------------------

    def degree(self, v: str) -> int:
        return len(self.incident[v])

    def valence(self, x: GraphPoint) -> int:
        if isinstance(x, EdgePoint):
            return 2
        return self.degree(x.id)

    def branching_points(self) -> list[Vertex]:
        return [Vertex(v) for v in self.vertices if self.degree(v) > 2]

    def endpoints(self) -> list[Vertex]:
        return [Vertex(v) for v in self.vertices if self.degree(v) == 1]

    @property
    def real_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if v not in self.synthetic)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        todo = deque(seen)
        while todo:
            a = todo.popleft()
            for e, end in self.incident[a]:
                b = self.edges[e].end_vertex(1 - end)
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return len(seen) == len(self.vertices)


# validation -------------------------------------------------------------

def _fresh(name: str, taken: set) -> str:
    cand, k = name, 1
    while cand in taken:
        cand = f"{name}_{k}"
        k += 1
    taken.add(cand)
    return cand


def validate_graph(g: Graph) -> Graph:
    """Return ``g`` with every circle passing through at least three vertices.

    Loops are cut into three equal edges and every parallel edge after the
    first in its bundle is cut at its midpoint.  The inserted vertices are
    flagged synthetic.  Raises ``DisconnectedGraph`` if ``g`` is not
    connected.
    """
    if not g.edges:
        raise GraphError("a graph needs at least one edge")
    if not g.is_connected():
        raise DisconnectedGraph("graph is not connected")

    seen_pairs: set = set()
    cuts: dict[str, int] = {}
    for e in g.edges.values():
        if e.u == e.v:
            cuts[e.id] = 3
            continue
        pair = frozenset((e.u, e.v))
        if pair in seen_pairs:
            cuts[e.id] = 2
        seen_pairs.add(pair)
    if not cuts:
        return g

    raw = g.raw
    vnames = set(g.vertices)
    enames = set(g.edges)
    vertices = list(g.vertices)
    synthetic = set(g.synthetic)
    edges = []
    origin = {}
    for e in g.edges.values():
        re, c0, c1 = g.origin[e.id]
        k = cuts.get(e.id, 1)
        if k == 1:
            edges.append((e.id, e.u, e.v, e.length))
            origin[e.id] = (re, c0, c1)
            continue
        enames.discard(e.id)
        chain = [e.u] + [_fresh(f"{e.id}~{i}", vnames) for i in range(1, k)] + [e.v]
        vertices.extend(chain[1:-1])
        synthetic.update(chain[1:-1])
        for i in range(k):
            sub = _fresh(f"{e.id}.{i}", enames)
            edges.append((sub, chain[i], chain[i + 1], e.length / k))
            origin[sub] = (re, c0 + (c1 - c0) * Fraction(i, k), c0 + (c1 - c0) * Fraction(i + 1, k))
    return Graph(vertices, edges, synthetic=synthetic, raw=raw, origin=origin)

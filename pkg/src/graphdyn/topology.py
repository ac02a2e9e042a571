"""Point-set topology of subsets of a graph: boundaries, components, circles."""

from __future__ import annotations

from fractions import Fraction

import networkx as nx

from .errors import NotConnected, NotOpen
from .graph import EdgePoint, Graph, GraphPoint, Vertex
from .sets import ArcSet, OpenArcSet, SetDistance, point_key

ZERO = Fraction(0)
ONE = Fraction(1)


def _covered_ends(s: ArcSet):
    """Set of (vertex, edge, end) branches at vertices covered by a positive-length interval."""
    out = set()
    for e, ivs in s.edges.items():
        edge = s.g.edges[e]
        a, b = ivs[0]
        if a == 0 and b > 0:
            out.add((edge.u, e, 0))
        a, b = ivs[-1]
        if b == 1 and a < 1:
            out.add((edge.v, e, 1))
    return out


def _interior_vertices(s: ArcSet):
    g = s.g
    ends = _covered_ends(s)
    return {v for v in s.vertices
            if all((v, e, end) in ends for e, end in g.incident[v])}


def _closed_boundary(s: ArcSet) -> ArcSet:
    pts = set(s.points())
    for e, ivs in s.edges.items():
        for a, b in ivs:
            if a < b:
                if 0 < a:
                    pts.add(EdgePoint(e, a))
                if b < 1:
                    pts.add(EdgePoint(e, b))
    inner = _interior_vertices(s)
    pts.update(Vertex(v) for v in s.vertices - inner)
    return ArcSet.from_points(s.g, pts)


def _open_interior(s: ArcSet) -> OpenArcSet:
    fat = ArcSet(s.g, {e: [iv for iv in ivs if iv[0] < iv[1]] for e, ivs in s.edges.items()})
    inner = _interior_vertices(s)
    dels = set(_closed_boundary(fat).points())
    dels.update(Vertex(v) for v in fat.vertices - inner)
    return OpenArcSet(fat, dels)


def boundary(s) -> ArcSet:
    """Topological boundary in the graph, a finite set of points."""
    if isinstance(s, OpenArcSet):
        return _closed_boundary(s.carrier).union(s.deleted_set())
    return _closed_boundary(s)


def closure(s) -> ArcSet:
    if isinstance(s, OpenArcSet):
        return s.carrier
    return s


def interior(s) -> OpenArcSet:
    if isinstance(s, OpenArcSet):
        inner = _open_interior(s.carrier)
        return OpenArcSet(inner.carrier, set(inner.deleted) | set(s.deleted))
    return _open_interior(s)


def is_open(u: OpenArcSet) -> bool:
    return set(boundary(u.carrier).points()) <= set(u.deleted)


# components --------------------------------------------------------------

class _DSU:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _component_key(g, comp: ArcSet):
    keys = []
    for e, ivs in comp.edges.items():
        keys.append((g.edge_order[e], ivs[0][0]))
    for v in comp.vertices:
        keys.append(point_key(g, Vertex(v)))
    return min(keys)


def connected_components(s: ArcSet) -> list[ArcSet]:
    g = s.g
    dsu = _DSU()
    for v in s.vertices:
        dsu.find(("v", v))
    for e, ivs in s.edges.items():
        edge = g.edges[e]
        for i, (a, b) in enumerate(ivs):
            dsu.find(("i", e, i))
            if a == 0:
                dsu.union(("v", edge.u), ("i", e, i))
            if b == 1:
                dsu.union(("v", edge.v), ("i", e, i))
    groups = {}
    for atom in list(dsu.parent):
        groups.setdefault(dsu.find(atom), []).append(atom)
    comps = []
    for atoms in groups.values():
        edges, verts = {}, []
        for atom in atoms:
            if atom[0] == "v":
                verts.append(atom[1])
            else:
                edges.setdefault(atom[1], []).append(s.edges[atom[1]][atom[2]])
        comps.append(ArcSet(g, edges, verts))
    comps.sort(key=lambda c: _component_key(g, c))
    return comps


def is_connected(s) -> bool:
    if isinstance(s, OpenArcSet):
        return len(open_components(s)) == 1
    return len(connected_components(s)) == 1


def open_components(u: OpenArcSet) -> list[OpenArcSet]:
    """Connected components of ``carrier - deleted``."""
    g = u.g
    cuts = {}
    for x in u.deleted:
        if isinstance(x, EdgePoint):
            cuts.setdefault(x.edge, []).append(x.t)
    dead = {x.id for x in u.deleted if isinstance(x, Vertex)}
    dsu = _DSU()
    pieces = {}
    for v in u.carrier.vertices - dead:
        dsu.find(("v", v))
    for e, ivs in u.carrier.edges.items():
        edge = g.edges[e]
        for i, (a, b) in enumerate(ivs):
            inner = sorted(c for c in cuts.get(e, ()) if a <= c <= b)
            bounds = [a] + inner + [b]
            for j in range(len(bounds) - 1):
                lo, hi = bounds[j], bounds[j + 1]
                if lo == hi and (lo in inner):
                    continue
                key = ("i", e, i, j)
                pieces[key] = (e, lo, hi)
                dsu.find(key)
                if lo == 0 and j == 0 and edge.u not in dead:
                    dsu.union(("v", edge.u), key)
                if hi == 1 and j == len(bounds) - 2 and edge.v not in dead:
                    dsu.union(("v", edge.v), key)
    groups = {}
    for atom in list(dsu.parent):
        groups.setdefault(dsu.find(atom), []).append(atom)
    comps = []
    for atoms in groups.values():
        edges, verts = {}, []
        for atom in atoms:
            if atom[0] == "v":
                verts.append(atom[1])
            else:
                e, lo, hi = pieces[atom]
                edges.setdefault(e, []).append((lo, hi))
        carrier = ArcSet(g, edges, verts)
        comps.append(OpenArcSet(carrier, [x for x in u.deleted if x in carrier]))
    comps = [c for c in comps if c]
    comps.sort(key=lambda c: _component_key(g, c.carrier))
    return comps


# branching ---------------------------------------------------------------

def total_branching_number(g: Graph, u) -> int:
    """Sum of ``valence - 2`` over the branching points lying in ``u``."""
    if isinstance(u, ArcSet):
        u = interior(u)
    if not is_open(u):
        raise NotOpen("set is not open in the graph")
    if not is_connected(u):
        raise NotConnected("set is not connected")
    return sum(g.degree(v.id) - 2 for v in g.branching_points() if v in u)


def xi(g: Graph) -> int:
    return sum(g.degree(v.id) - 2 for v in g.branching_points())


# circles -----------------------------------------------------------------

def _full_edge_graph(s: ArcSet):
    g = s.g
    h = nx.Graph()
    for e, ivs in s.edges.items():
        if ivs == ((ZERO, ONE),):
            edge = g.edges[e]
            h.add_edge(edge.u, edge.v, id=e)
    return h


def _cycles(s: ArcSet):
    g = s.g
    h = _full_edge_graph(s)
    out = []
    for cyc in nx.simple_cycles(h):
        if len(cyc) < 3:
            continue
        edges = [h.edges[cyc[i], cyc[(i + 1) % len(cyc)]]["id"] for i in range(len(cyc))]
        out.append((frozenset(cyc), frozenset(edges)))
    out.sort(key=lambda c: sorted(g.edge_order[e] for e in c[1]))
    return out


def find_circles(s: ArcSet) -> list[ArcSet]:
    """Every simple closed curve contained in ``s``."""
    return [ArcSet.full_edges(s.g, edges) for _, edges in _cycles(s)]


def max_disjoint_circles(g: Graph) -> int:
    cycles = [vs for vs, _ in _cycles(ArcSet.whole(g))]
    cycles.sort(key=len)
    best = 0

    def search(start, used, count):
        nonlocal best
        best = max(best, count)
        if count + (len(cycles) - start) <= best:
            return
        for i in range(start, len(cycles)):
            if not (cycles[i] & used):
                search(i + 1, used | cycles[i], count + 1)

    search(0, frozenset(), 0)
    return best


def ball(g: Graph, x: GraphPoint, r) -> OpenArcSet:
    """Open metric ball ``{y : d(x, y) < r}``."""
    return SetDistance(ArcSet.from_points(g, [x])).open_neighborhood(r)

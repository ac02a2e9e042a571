"""Closed and relatively open subsets of a graph, and distances to them.

An ``ArcSet`` stores, per edge, sorted pairwise disjoint closed intervals
of the edge parameter plus the set of member vertices.  Intervals never
touch each other, ``[0, 0]`` and ``[1, 1]`` are stored as vertices, and
an interval reaching ``0`` or ``1`` always has the matching vertex in
``vertices``.  Two normalized sets are equal iff they are the same set.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from fractions import Fraction

from .graph import EdgePoint, Graph, GraphPoint, Vertex, as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def point_key(g: Graph, x: GraphPoint):
    """Deterministic sort key: (edge index, coordinate)."""
    e, t = g.coords(x)
    return (g.edge_order[e], t)


def merge_intervals(ivs):
    out = []
    for a, b in sorted(ivs):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


class ArcSet:
    __slots__ = ("g", "edges", "vertices", "_hash")

    def __init__(self, g: Graph, edges=None, vertices=()):
        self.g = g
        verts = set(vertices)
        clean = {}
        for e, ivs in (edges or {}).items():
            edge = g.edges[e]
            keep = []
            for a, b in ivs:
                a, b = as_fraction(a), as_fraction(b)
                if a > b:
                    a, b = b, a
                a, b = max(a, ZERO), min(b, ONE)
                if a > b:
                    continue
                keep.append((a, b))
            keep = merge_intervals(keep)
            final = []
            for a, b in keep:
                if a == 0:
                    verts.add(edge.u)
                if b == 1:
                    verts.add(edge.v)
                if a == b and a in (0, 1):
                    continue
                final.append((a, b))
            if final:
                clean[e] = tuple(final)
        self.edges = {e: clean[e] for e in sorted(clean, key=g.edge_order.__getitem__)}
        self.vertices = frozenset(verts)
        self._hash = None

    # constructors -------------------------------------------------------

    @classmethod
    def empty(cls, g):
        return cls(g)

    @classmethod
    def whole(cls, g):
        return cls(g, {e: [(ZERO, ONE)] for e in g.edges}, g.vertices)

    @classmethod
    def interval(cls, g, edge, a, b):
        return cls(g, {edge: [(a, b)]})

    @classmethod
    def full_edges(cls, g, edges):
        return cls(g, {e: [(ZERO, ONE)] for e in edges})

    @classmethod
    def from_points(cls, g, points):
        edges, verts = {}, set()
        for x in points:
            if isinstance(x, Vertex):
                verts.add(x.id)
            else:
                edges.setdefault(x.edge, []).append((x.t, x.t))
        return cls(g, edges, verts)

    # basic protocol -----------------------------------------------------

    def _key(self):
        return (tuple(self.edges.items()), self.vertices)

    def __eq__(self, other):
        return isinstance(other, ArcSet) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __bool__(self):
        return bool(self.edges) or bool(self.vertices)

    def is_empty(self):
        return not self

    def __repr__(self):
        return f"ArcSet({self.describe()})"

    def describe(self):
        parts = []
        for e, ivs in self.edges.items():
            for a, b in ivs:
                parts.append(f"{e}:{a}" if a == b else f"{e}:[{a},{b}]")
        covered = self._covered_vertices()
        for v in sorted(self.vertices - covered, key=self.g.vertex_order.__getitem__):
            parts.append(v)
        return " ".join(parts) if parts else "{}"

    def _covered_vertices(self):
        out = set()
        for e, ivs in self.edges.items():
            edge = self.g.edges[e]
            if ivs[0][0] == 0:
                out.add(edge.u)
            if ivs[-1][1] == 1:
                out.add(edge.v)
        return out

    def __contains__(self, x: GraphPoint):
        if isinstance(x, Vertex):
            return x.id in self.vertices
        for a, b in self.edges.get(x.edge, ()):
            if a <= x.t <= b:
                return True
            if a > x.t:
                break
        return False

    # set algebra --------------------------------------------------------

    def union(self, *others):
        edges = {e: list(ivs) for e, ivs in self.edges.items()}
        verts = set(self.vertices)
        for o in others:
            for e, ivs in o.edges.items():
                edges.setdefault(e, []).extend(ivs)
            verts |= o.vertices
        return ArcSet(self.g, edges, verts)

    __or__ = union

    def intersection(self, other):
        edges = {}
        for e, ivs in self.edges.items():
            jvs = other.edges.get(e)
            if not jvs:
                continue
            out, i, j = [], 0, 0
            while i < len(ivs) and j < len(jvs):
                a = max(ivs[i][0], jvs[j][0])
                b = min(ivs[i][1], jvs[j][1])
                if a <= b:
                    out.append((a, b))
                if ivs[i][1] < jvs[j][1]:
                    i += 1
                else:
                    j += 1
            if out:
                edges[e] = out
        return ArcSet(self.g, edges, self.vertices & other.vertices)

    __and__ = intersection

    def meets(self, other):
        return not self.intersection(other).is_empty()

    def issubset(self, other):
        return self.intersection(other) == self

    __le__ = issubset

    def closure_minus(self, other):
        """Closure of the set difference ``self - other``."""
        edges = {}
        for e, ivs in self.edges.items():
            jvs = other.edges.get(e, ())
            out = []
            for a, b in ivs:
                if a == b:
                    if not _covers(jvs, a):
                        out.append((a, a))
                    continue
                cur = a
                for c, d in jvs:
                    if d <= cur:
                        continue
                    if c >= b:
                        break
                    if c > cur:
                        out.append((cur, c))
                    cur = max(cur, d)
                    if cur >= b:
                        break
                if cur < b:
                    out.append((cur, b))
            if out:
                edges[e] = out
        return ArcSet(self.g, edges, self.vertices - other.vertices)

    def points(self):
        """Isolated points of the set, as GraphPoints."""
        out = []
        for e, ivs in self.edges.items():
            out.extend(EdgePoint(e, a) for a, b in ivs if a == b)
        covered = self._covered_vertices()
        out.extend(Vertex(v) for v in self.vertices - covered)
        return sorted(out, key=lambda x: point_key(self.g, x))

    def extreme_points(self):
        """Interval endpoints and member vertices: where edge-monotone functions peak."""
        out = {Vertex(v) for v in self.vertices}
        for e, ivs in self.edges.items():
            for a, b in ivs:
                out.add(self.g.point(e, a))
                out.add(self.g.point(e, b))
        return sorted(out, key=lambda x: point_key(self.g, x))

    def total_length(self):
        return sum(((b - a) * self.g.edges[e].length
                    for e, ivs in self.edges.items() for a, b in ivs), ZERO)

    def grid(self, density):
        """Points ``j/density`` of every edge lying in the set, plus member vertices."""
        density = int(density)
        out = {Vertex(v) for v in self.vertices}
        for e, ivs in self.edges.items():
            for a, b in ivs:
                j0 = -((-a.numerator * density) // a.denominator)
                j1 = (b.numerator * density) // b.denominator
                for j in range(j0, j1 + 1):
                    out.add(self.g.point(e, Fraction(j, density)))
        return sorted(out, key=lambda x: point_key(self.g, x))


def _covers(jvs, t):
    return any(c <= t <= d for c, d in jvs)


class OpenArcSet:
    """``carrier`` minus the finite set ``deleted``.

    After normalization every deleted point is a limit of the remaining
    points, so ``carrier`` is the closure of the represented set.
    """

    __slots__ = ("g", "carrier", "deleted")

    def __init__(self, carrier: ArcSet, deleted=()):
        g = carrier.g
        dels = {x for x in deleted if x in carrier}
        iso = set(carrier.points())
        lone = dels & iso
        if lone:
            carrier = carrier.closure_minus(ArcSet.from_points(g, lone))
            dels -= lone
        self.g = g
        self.carrier = carrier
        self.deleted = frozenset(dels)

    @classmethod
    def from_arcset(cls, s: ArcSet):
        return cls(s)

    def __eq__(self, other):
        return (isinstance(other, OpenArcSet) and self.carrier == other.carrier
                and self.deleted == other.deleted)

    def __hash__(self):
        return hash((self.carrier, self.deleted))

    def __bool__(self):
        return bool(self.carrier)

    def __contains__(self, x):
        return x in self.carrier and x not in self.deleted

    def __repr__(self):
        dl = ", ".join(str(x) for x in sorted(self.deleted, key=lambda x: point_key(self.g, x)))
        return f"OpenArcSet({self.carrier.describe()} minus {{{dl}}})"

    def describe(self):
        if not self.deleted:
            return self.carrier.describe()
        dl = sorted(self.deleted, key=lambda x: point_key(self.g, x))
        shown = [x.id if isinstance(x, Vertex) else f"{x.edge}:{x.t}" for x in dl]
        return f"{self.carrier.describe()} minus {{{', '.join(shown)}}}"

    def deleted_set(self):
        return ArcSet.from_points(self.g, self.deleted)

    def grid(self, density):
        return [x for x in self.carrier.grid(density) if x not in self.deleted]


# distances ----------------------------------------------------------------

class SetDistance:
    """Exact distance function to a nonempty closed set ``s``."""

    def __init__(self, s: ArcSet):
        if s.is_empty():
            raise ValueError("distance to the empty set")
        g = self.g = s.g
        self.s = s
        dist = {v: None for v in g.vertices}
        heap = []

        def push(v, d):
            if dist[v] is None or d < dist[v]:
                dist[v] = d
                heapq.heappush(heap, (d, g.vertex_order[v], v))

        for v in s.vertices:
            push(v, ZERO)
        for e, ivs in s.edges.items():
            edge = g.edges[e]
            push(edge.u, ivs[0][0] * edge.length)
            push(edge.v, (1 - ivs[-1][1]) * edge.length)
        done = set()
        while heap:
            d, _, v = heapq.heappop(heap)
            if v in done or d != dist[v]:
                continue
            done.add(v)
            for e, end in g.incident[v]:
                edge = g.edges[e]
                push(edge.end_vertex(1 - end), d + edge.length)
        self.vdist = dist
        self._starts = {}

    def _edge_terms(self, e):
        """Affine pieces whose minimum is the distance along edge ``e``.

        Each term is ``(c0, c1, lo, hi)`` meaning ``c0 + c1 * t`` valid for
        ``lo <= t <= hi``.
        """
        edge = self.g.edges[e]
        L = edge.length
        terms = [(self.vdist[edge.u], L, ZERO, ONE),
                 (self.vdist[edge.v] + L, -L, ZERO, ONE)]
        for a, b in self.s.edges.get(e, ()):
            terms.append((a * L, -L, ZERO, a))
            terms.append((ZERO, ZERO, a, b))
            terms.append((-b * L, L, b, ONE))
        return terms

    def at(self, x: GraphPoint) -> Fraction:
        if isinstance(x, Vertex):
            return self.vdist[x.id]
        return self.along(x.edge, x.t)

    __call__ = at

    def along(self, e, t):
        edge = self.g.edges[e]
        L = edge.length
        best = min(self.vdist[edge.u] + L * t, self.vdist[edge.v] + L * (1 - t))
        ivs = self.s.edges.get(e)
        if not ivs:
            return best
        starts = self._starts.get(e)
        if starts is None:
            starts = self._starts[e] = [a for a, _ in ivs]
        # only the nearest interval on either side of t matters
        i = bisect_right(starts, t)
        if i > 0:
            a, b = ivs[i - 1]
            if t <= b:
                return ZERO
            best = min(best, (t - b) * L)
        if i < len(ivs):
            best = min(best, (ivs[i][0] - t) * L)
        return best

    def closed_neighborhood(self, r) -> ArcSet:
        """``{x : d(x, s) <= r}``."""
        r = as_fraction(r)
        g = self.g
        edges = {}
        for e, edge in g.edges.items():
            L = edge.length
            ivs = []
            du, dv = self.vdist[edge.u], self.vdist[edge.v]
            if du <= r:
                ivs.append((ZERO, min(ONE, (r - du) / L)))
            if dv <= r:
                ivs.append((max(ZERO, 1 - (r - dv) / L), ONE))
            for a, b in self.s.edges.get(e, ()):
                ivs.append((max(ZERO, a - r / L), min(ONE, b + r / L)))
            if ivs:
                edges[e] = ivs
        verts = [v for v in g.vertices if self.vdist[v] <= r]
        return ArcSet(g, edges, verts)

    def level_points(self, r):
        """All points at distance exactly ``r`` (finite when ``r > 0``)."""
        r = as_fraction(r)
        g = self.g
        out = {Vertex(v) for v in g.vertices if self.vdist[v] == r}
        for e in g.edges:
            terms = self._edge_terms(e)
            for c0, c1, lo, hi in terms:
                if c1 == 0:
                    continue
                t = (r - c0) / c1
                if 0 < t < 1 and lo <= t <= hi and self.along(e, t) == r:
                    out.add(EdgePoint(e, t))
        return out

    def open_neighborhood(self, r) -> OpenArcSet:
        """``{x : d(x, s) < r}`` for ``r > 0``."""
        r = as_fraction(r)
        if r <= 0:
            raise ValueError("radius must be positive")
        return OpenArcSet(self.closed_neighborhood(r), self.level_points(r))


def neighborhood(s: ArcSet, r) -> ArcSet:
    """Closed ``r``-neighborhood of ``s`` (``s`` itself when ``r == 0``)."""
    if s.is_empty():
        return s
    return SetDistance(s).closed_neighborhood(r)


def set_distance(a: ArcSet, b: ArcSet):
    """Exact ``inf {d(x, y) : x in a, y in b}``; ``None`` if either is empty."""
    if a.is_empty() or b.is_empty():
        return None
    if a.meets(b):
        return ZERO
    # on each interval of ``a`` every term of d(., b) is monotone, so the
    # infimum is attained at an interval end or a member vertex
    db = SetDistance(b)
    return min(db(x) for x in a.extreme_points())


def hausdorff_within(a: ArcSet, b: ArcSet, eps) -> bool:
    """True iff each set lies in the closed ``eps``-neighborhood of the other."""
    if a.is_empty() or b.is_empty():
        return a.is_empty() and b.is_empty()
    return a.issubset(neighborhood(b, eps)) and b.issubset(neighborhood(a, eps))

"""Continuous piecewise-affine self-maps of a graph.

A map is given per edge as pieces ``[t0, t1]`` each traversing an edge
path affinely in arclength.  Internally every piece is split until it
lands inside a single edge, so a stored piece is

    Piece(t0, t1, edge, a, b):  t  |->  (edge, a + (t - t0) / (t1 - t0) * (b - a))

with ``a == b`` for constant pieces.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import (DiscontinuousAtBreakpoint, DiscontinuousAtVertex, MapError,
                     PathNotContiguous, PieceBudgetExceeded, PieceCoverage)
from .graph import EdgePoint, Graph, GraphPoint, Vertex, as_fraction
from .sets import ArcSet

ZERO = Fraction(0)
ONE = Fraction(1)
DEFAULT_PIECE_CAP = 100_000


@dataclass(frozen=True)
class Step:
    """Traverse ``edge`` from coordinate ``ta`` to ``tb``."""

    edge: str
    ta: Fraction
    tb: Fraction
    sign: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ta", as_fraction(self.ta))
        object.__setattr__(self, "tb", as_fraction(self.tb))
        if self.sign == 0:
            object.__setattr__(self, "sign", 1 if self.tb >= self.ta else -1)


@dataclass(frozen=True)
class RawPiece:
    edge: str
    t0: Fraction
    t1: Fraction
    path: tuple

    def __post_init__(self):
        object.__setattr__(self, "t0", as_fraction(self.t0))
        object.__setattr__(self, "t1", as_fraction(self.t1))
        object.__setattr__(self, "path", tuple(self.path))


class Piece(NamedTuple):
    t0: Fraction
    t1: Fraction
    edge: str
    a: Fraction
    b: Fraction

    def at(self, t):
        if self.a == self.b:
            return self.a
        return self.a + (t - self.t0) / (self.t1 - self.t0) * (self.b - self.a)

    def solve(self, s):
        """Domain parameter mapped to target coordinate ``s`` (non-constant pieces)."""
        return self.t0 + (s - self.a) / (self.b - self.a) * (self.t1 - self.t0)


class PLMap:
    __slots__ = ("g", "pieces", "_starts", "_vimg")

    def __init__(self, g: Graph, pieces: dict):
        self.g = g
        self.pieces = {e: tuple(pieces[e]) for e in g.edges}
        self._starts = {e: [p.t0 for p in ps] for e, ps in self.pieces.items()}
        self._vimg = {}

    def __eq__(self, other):
        return isinstance(other, PLMap) and self.g == other.g and self.pieces == other.pieces

    def __hash__(self):
        return hash(tuple(self.pieces.items()))

    def piece_count(self):
        return sum(len(ps) for ps in self.pieces.values())

    def breakpoints(self, e):
        return [p.t0 for p in self.pieces[e]] + [ONE]

    def piece_at(self, e, t):
        i = bisect.bisect_right(self._starts[e], t) - 1
        return self.pieces[e][max(i, 0)]

    def at_coord(self, e, t) -> GraphPoint:
        p = self.piece_at(e, t)
        return self.g.point(p.edge, p.at(t))

    def __call__(self, x: GraphPoint) -> GraphPoint:
        if isinstance(x, EdgePoint):
            return self.at_coord(x.edge, x.t)
        y = self._vimg.get(x.id)
        if y is None:
            e, end = self.g.incident[x.id][0]
            y = self._vimg[x.id] = self.at_coord(e, Fraction(end))
        return y

    def slope(self, e, p: Piece):
        """Arclength slope of a stored piece (signed along the target edge)."""
        return ((p.b - p.a) * self.g.edges[p.edge].length
                / ((p.t1 - p.t0) * self.g.edges[e].length))


def evaluate(f: PLMap, x: GraphPoint) -> GraphPoint:
    return f(x)


# construction ------------------------------------------------------------

def _canonical_point_piece(g, t0, t1, y: GraphPoint):
    if isinstance(y, Vertex):
        e, end = min(g.incident[y.id], key=lambda ie: g.edge_order[ie[0]])
        return Piece(t0, t1, e, Fraction(end), Fraction(end))
    return Piece(t0, t1, y.edge, y.t, y.t)


def _canonicalize(g, e, pieces):
    """Merge collinear neighbours and give constant pieces a canonical target."""
    out = []
    for p in pieces:
        if p.a == p.b:
            p = _canonical_point_piece(g, p.t0, p.t1, g.point(p.edge, p.a))
        if out:
            q = out[-1]
            if q.edge == p.edge and q.b == p.a:
                if q.a == q.b and p.a == p.b:
                    out[-1] = Piece(q.t0, p.t1, q.edge, q.a, q.a)
                    continue
                if (q.a != q.b and p.a != p.b
                        and (q.b - q.a) * (p.t1 - p.t0) == (p.b - p.a) * (q.t1 - q.t0)):
                    out[-1] = Piece(q.t0, p.t1, q.edge, q.a, p.b)
                    continue
        out.append(p)
    return out


def _atomize(g: Graph, rp: RawPiece):
    if rp.t0 >= rp.t1:
        raise PieceCoverage(f"empty piece [{rp.t0}, {rp.t1}] on edge {rp.edge!r}")
    steps = rp.path
    if not steps:
        raise PathNotContiguous(f"piece on {rp.edge!r} has an empty path")
    for s in steps:
        if s.edge not in g.edges:
            raise MapError(f"path uses unknown edge {s.edge!r}")
        if not (0 <= s.ta <= 1 and 0 <= s.tb <= 1):
            raise MapError(f"path coordinate outside [0, 1] on {s.edge!r}")
        if s.ta != s.tb and (s.sign > 0) != (s.tb > s.ta):
            raise PathNotContiguous(f"step on {s.edge!r} has orientation {s.sign:+d} "
                                    f"but runs {s.ta} -> {s.tb}")
    for s, nxt in zip(steps, steps[1:]):
        if g.point(s.edge, s.tb) != g.point(nxt.edge, nxt.ta):
            raise PathNotContiguous(f"path steps on {s.edge!r} and {nxt.edge!r} do not meet")
    lengths = [abs(s.tb - s.ta) * g.edges[s.edge].length for s in steps]
    total = sum(lengths, ZERO)
    if total == 0:
        return [Piece(rp.t0, rp.t1, steps[0].edge, steps[0].ta, steps[0].ta)]
    out = []
    acc = ZERO
    span = rp.t1 - rp.t0
    for s, ln in zip(steps, lengths):
        if ln == 0:
            continue
        u0 = rp.t0 + span * acc / total
        acc += ln
        u1 = rp.t0 + span * acc / total
        out.append(Piece(u0, u1, s.edge, s.ta, s.tb))
    return out


def _check_coverage(g, e, atoms):
    atoms.sort(key=lambda p: p.t0)
    if not atoms or atoms[0].t0 != 0 or atoms[-1].t1 != 1:
        raise PieceCoverage(f"pieces on edge {e!r} do not cover [0, 1]")
    for p, q in zip(atoms, atoms[1:]):
        if p.t1 != q.t0:
            raise PieceCoverage(f"pieces on edge {e!r} leave a gap or overlap at {p.t1}")
        if g.point(p.edge, p.b) != g.point(q.edge, q.a):
            raise DiscontinuousAtBreakpoint(e, p.t1)


def _check_vertices(g, pieces):
    for v in g.vertices:
        img = None
        for e, end in g.incident[v]:
            p = pieces[e][0] if end == 0 else pieces[e][-1]
            y = g.point(p.edge, p.a if end == 0 else p.b)
            if img is None:
                img = y
            elif y != img:
                raise DiscontinuousAtVertex(v)


def _translate(g: Graph, raw_pieces):
    """Carry pieces on ``g.raw`` over to the subdivided graph ``g``."""
    by_raw = {}
    for ne, (re, c0, c1) in g.origin.items():
        by_raw.setdefault(re, []).append((c0, c1, ne))
    for lst in by_raw.values():
        lst.sort()
    out = {e: [] for e in g.edges}
    for re, atoms in raw_pieces.items():
        for p in atoms:
            for c0, c1, ne in by_raw[re]:
                lo, hi = max(p.t0, c0), min(p.t1, c1)
                if lo >= hi:
                    continue
                sa, sb = p.at(lo), p.at(hi)
                if sa == sb:
                    y = g.from_raw(p.edge, sa)
                    out[ne].append(_canonical_point_piece(g, (lo - c0) / (c1 - c0),
                                                          (hi - c0) / (c1 - c0), y))
                    continue
                smin, smax = min(sa, sb), max(sa, sb)
                for d0, d1, te in by_raw[p.edge]:
                    ta, tb = max(smin, d0), min(smax, d1)
                    if ta >= tb:
                        continue
                    if sa > sb:
                        ta, tb = tb, ta
                    u0 = Piece(lo, hi, p.edge, sa, sb).solve(ta)
                    u1 = Piece(lo, hi, p.edge, sa, sb).solve(tb)
                    out[ne].append(Piece((u0 - c0) / (c1 - c0), (u1 - c0) / (c1 - c0), te,
                                         (ta - d0) / (d1 - d0), (tb - d0) / (d1 - d0)))
    for e in out:
        out[e].sort(key=lambda p: p.t0)
    return out


def validate_map(g: Graph, raw_pieces) -> PLMap:
    """Build a ``PLMap`` from raw pieces given on ``g.raw``, checking continuity.

    ``raw_pieces`` is an iterable of ``RawPiece``.
    """
    raw = g.raw
    atoms = {e: [] for e in raw.edges}
    for rp in raw_pieces:
        if rp.edge not in raw.edges:
            raise MapError(f"piece on unknown edge {rp.edge!r}")
        atoms[rp.edge].extend(_atomize(raw, rp))
    for e, lst in atoms.items():
        _check_coverage(raw, e, lst)
    _check_vertices(raw, atoms)
    if raw is not g:
        atoms = _translate(g, atoms)
    return PLMap(g, {e: _canonicalize(g, e, atoms[e]) for e in g.edges})


def from_pieces(g: Graph, pieces: dict) -> PLMap:
    """Build directly from stored-form pieces on ``g`` (no translation)."""
    atoms = {e: sorted((Piece(*map(_fr_or_str, p)) for p in pieces[e]), key=lambda p: p.t0)
             for e in g.edges}
    for e, lst in atoms.items():
        _check_coverage(g, e, lst)
    _check_vertices(g, atoms)
    return PLMap(g, {e: _canonicalize(g, e, atoms[e]) for e in g.edges})


def _fr_or_str(x):
    return x if isinstance(x, str) else as_fraction(x)


def identity(g: Graph) -> PLMap:
    return PLMap(g, {e: [Piece(ZERO, ONE, e, ZERO, ONE)] for e in g.edges})


# sets ---------------------------------------------------------------------

def image(f: PLMap, s: ArcSet) -> ArcSet:
    g = f.g
    edges = {}
    verts = set()
    for e, ivs in s.edges.items():
        ps = f.pieces[e]
        starts = f._starts[e]
        for lo, hi in ivs:
            i = max(bisect.bisect_right(starts, lo) - 1, 0)
            while i < len(ps) and ps[i].t0 <= hi:
                p = ps[i]
                a, b = max(lo, p.t0), min(hi, p.t1)
                if a <= b:
                    edges.setdefault(p.edge, []).append((p.at(a), p.at(b)))
                i += 1
    for v in s.vertices:
        y = f(Vertex(v))
        if isinstance(y, Vertex):
            verts.add(y.id)
        else:
            edges.setdefault(y.edge, []).append((y.t, y.t))
    return ArcSet(g, edges, verts)


def preimage(f: PLMap, s: ArcSet) -> ArcSet:
    g = f.g
    edges = {}
    for e, ps in f.pieces.items():
        out = []
        for p in ps:
            te = g.edges[p.edge]
            targets = list(s.edges.get(p.edge, ()))
            if te.u in s.vertices:
                targets.append((ZERO, ZERO))
            if te.v in s.vertices:
                targets.append((ONE, ONE))
            if p.a == p.b:
                if any(c <= p.a <= d for c, d in targets):
                    out.append((p.t0, p.t1))
                continue
            smin, smax = min(p.a, p.b), max(p.a, p.b)
            for c, d in targets:
                c, d = max(c, smin), min(d, smax)
                if c <= d:
                    out.append((p.solve(c), p.solve(d)))
        if out:
            edges[e] = out
    res = ArcSet(g, edges)
    # vertices mapped into s are already covered as interval ends
    return res


def iterate_point(f: PLMap, x: GraphPoint, n: int) -> list:
    out = [x]
    for _ in range(n):
        x = f(x)
        out.append(x)
    return out


# composition --------------------------------------------------------------

def compose(outer: PLMap, inner: PLMap, piece_cap=DEFAULT_PIECE_CAP) -> PLMap:
    """``outer o inner``."""
    g = inner.g
    result = {}
    count = 0
    for e, ps in inner.pieces.items():
        out = []
        for p in ps:
            if p.a == p.b:
                y = outer.at_coord(p.edge, p.a)
                out.append(_canonical_point_piece(g, p.t0, p.t1, y))
                continue
            lo, hi = min(p.a, p.b), max(p.a, p.b)
            cuts = [s for s in outer.breakpoints(p.edge) if lo < s < hi]
            if p.a > p.b:
                cuts.reverse()
            marks = [p.a] + cuts + [p.b]
            for s0, s1 in zip(marks, marks[1:]):
                u0, u1 = p.solve(s0), p.solve(s1)
                q = outer.piece_at(p.edge, (s0 + s1) / 2)
                out.append(Piece(u0, u1, q.edge, q.at(s0), q.at(s1)))
        out = _canonicalize(g, e, out)
        count += len(out)
        if count > piece_cap:
            raise PieceBudgetExceeded(count, piece_cap)
        result[e] = out
    return PLMap(g, result)


def power(f: PLMap, n: int, piece_cap=DEFAULT_PIECE_CAP) -> PLMap:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return identity(f.g)
    # square-and-multiply; composition is associative so the result is f^n
    result, base = None, f
    while True:
        if n & 1:
            result = base if result is None else compose(base, result, piece_cap)
        n >>= 1
        if not n:
            return result
        base = compose(base, base, piece_cap)


class PowerCache:
    """Memoized ``f^n`` for increasing ``n``."""

    def __init__(self, f: PLMap, piece_cap=DEFAULT_PIECE_CAP):
        self.f = f
        self.piece_cap = piece_cap
        self._pows = [identity(f.g), f]

    def __getitem__(self, n):
        while len(self._pows) <= n:
            self._pows.append(compose(self.f, self._pows[-1], self.piece_cap))
        return self._pows[n]

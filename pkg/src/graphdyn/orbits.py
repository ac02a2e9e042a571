"""Orbits of sets: forward segments, stabilization, inverse orbits, absorbed
sets and the escaping tail of a non-stabilizing orbit."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import OrbitStabilized, PieceBudgetExceeded, PreconditionFailed
from .graph import EdgePoint, GraphPoint, Vertex
from .plmap import PLMap, image, power, preimage
from .sets import ArcSet, neighborhood, point_key, set_distance
from .topology import connected_components

ZERO = Fraction(0)


def orbit_segment(f: PLMap, k: ArcSet, n: int) -> ArcSet:
    """Union of ``f^i(k)`` for ``0 <= i <= n``."""
    x = k
    for _ in range(n):
        nxt = k.union(image(f, x))
        if nxt == x:
            break
        x = nxt
    return x


@dataclass(frozen=True)
class Stabilized:
    X: ArcSet
    n: int
    stabilized = True


@dataclass(frozen=True)
class NonStabilized:
    X: ArcSet
    cap: int
    stabilized = False


def _check_overlap(f, k):
    if k.is_empty():
        raise PreconditionFailed("seed set is empty")
    if not image(f, k).meets(k):
        raise PreconditionFailed("f(K) does not meet K")


def orbit_stabilize(f: PLMap, k: ArcSet, cap: int):
    """First ``n`` with ``O_{n+1} = O_n``, or the ``cap`` segment if none."""
    _check_overlap(f, k)
    x = k
    for n in range(cap):
        nxt = k.union(image(f, x))
        if nxt == x:
            return Stabilized(x, n)
        x = nxt
    return NonStabilized(x, cap)


def inverse_orbit(f: PLMap, k: ArcSet, depth: int) -> ArcSet:
    """Union of ``f^{-i}(k)`` for ``0 <= i <= depth``."""
    x = k
    for _ in range(depth):
        nxt = k.union(preimage(f, x))
        if nxt == x:
            break
        x = nxt
    return x


@dataclass(frozen=True)
class Absorbed:
    X: ArcSet
    depth: int
    stabilized: bool

    def __iter__(self):
        return iter((self.X, self.stabilized))


def _meeting(s: ArcSet, k: ArcSet) -> ArcSet:
    out = ArcSet.empty(s.g)
    for c in connected_components(s):
        if c.meets(k):
            out = out.union(c)
    return out


def main_absorbed(f: PLMap, k: ArcSet, depth: int, check=True) -> Absorbed:
    """Components of the depth-``depth`` inverse orbit of ``k`` that meet ``k``.

    ``stabilized`` tells whether one more preimage step changes nothing.
    """
    if check:
        _check_overlap(f, k)
    x = k
    prev = None
    for _ in range(depth):
        nxt = k.union(preimage(f, x))
        prev, x = x, nxt
        if nxt == prev:
            break
    stable = prev is not None and prev == x
    if depth == 0:
        stable = k.union(preimage(f, k)) == k
    return Absorbed(_meeting(x, k), depth, stable)


# escaping tail ------------------------------------------------------------

@dataclass
class Nest:
    """Shrinking components of ``cl(X_m - X_n)`` tracked over ``n``."""

    components: list = field(default_factory=list)
    diameters: list = field(default_factory=list)
    point: GraphPoint | None = None
    period: int | None = None

    @property
    def ratios(self):
        d = self.diameters
        return [d[i + 1] / d[i] for i in range(len(d) - 1) if d[i] != 0]

    @property
    def final(self):
        return self.components[-1]

    @property
    def resolved(self):
        return self.point is not None


@dataclass(frozen=True)
class EscapeArc:
    u: GraphPoint
    v: GraphPoint
    edge: str
    checked: int


@dataclass
class EscapeResult:
    S: ArcSet
    witness: EscapeArc | None
    nests: list
    lam: int
    beta: int
    cap: int
    shrink: Fraction

    def __iter__(self):
        return iter((self.S, self.witness))

    @property
    def candidates(self):
        return [n.point for n in self.nests if n.resolved]

    def certified(self, q):
        """Every nest shrinks by a factor ``<= q`` in every round."""
        return all(r <= q for n in self.nests for r in n.ratios)


def _diam(s: ArcSet):
    return s.total_length()


def _periodic_in(f, period_cap, window, piece_cap):
    from .periodic import fixed_points

    found = []
    for d in range(1, period_cap + 1):
        try:
            fd = power(f, d, piece_cap)
        except PieceBudgetExceeded:
            break
        sol = fixed_points(fd)
        for p in sol.points:
            if p in window and p not in [q for q, _ in found]:
                found.append((p, d))
    return found


def escaping_tail(f: PLMap, k: ArcSet, cap: int = 40, shrink=Fraction(9, 10),
                  piece_cap=10_000, grid_exp=10) -> EscapeResult:
    """Approximate ``S = \\bigcap_n cl(X - X_n)`` for a non-stabilizing orbit of ``k``.

    Each component of ``cl(X_cap - X_n)`` is followed from the round ``beta``
    after which the component count ``lam`` stays fixed.  A nest is resolved
    to an exact periodic point of period ``<= lam`` lying within
    ``diam / (1 - q)`` of its last component, ``q`` the worst observed shrink
    ratio (``shrink`` if that is worse than ``shrink``).
    """
    _check_overlap(f, k)
    segs = [k]
    for n in range(cap):
        nxt = k.union(image(f, segs[-1]))
        if nxt == segs[-1]:
            raise OrbitStabilized(n)
        segs.append(nxt)
    xm = segs[cap]
    layers = [connected_components(xm.closure_minus(segs[n])) for n in range(cap)]
    counts = [len(c) for c in layers]
    beta = cap - 1
    while beta > 0 and counts[beta - 1] == counts[cap - 1]:
        beta -= 1
    lam = counts[cap - 1]
    nests = []
    for comp in layers[beta]:
        nest = Nest([comp], [_diam(comp)])
        for n in range(beta + 1, cap):
            inside = [c for c in layers[n] if c.issubset(nest.final)]
            if len(inside) != 1:
                break
            nest.components.append(inside[0])
            nest.diameters.append(_diam(inside[0]))
        nests.append(nest)

    points = []
    for nest in nests:
        ratios = nest.ratios
        q = max(ratios) if ratios else shrink
        if q >= 1:
            continue
        radius = nest.diameters[-1] / (1 - q)
        window = neighborhood(nest.final, radius)
        found = _periodic_in(f, max(lam, 1), window, piece_cap)
        if found:
            best = min(found, key=lambda pd: (set_distance(ArcSet.from_points(f.g, [pd[0]]),
                                                           nest.final),
                                              point_key(f.g, pd[0])))
            nest.point, nest.period = best
            points.append(best[0])
    S = ArcSet.from_points(f.g, points)
    witness = None
    if len(nests) == 1 and nests[0].resolved:
        witness = _escape_arc(f, xm, nests[0], grid_exp)
    return EscapeResult(S, witness, nests, lam, beta, cap, shrink)


def _escape_arc(f, xm, nest, grid_exp):
    g = f.g
    v = nest.point
    final = nest.final
    # the arc lies on the edge carrying the nest's last component
    e = next(iter(final.edges), None)
    if e is None:
        return None
    tv = g.coords(v)[1] if isinstance(v, EdgePoint) else None
    edge = g.edges[e]
    if isinstance(v, Vertex):
        if v.id == edge.v:
            tv = Fraction(1)
        elif v.id == edge.u:
            tv = Fraction(0)
        else:
            return None
    elif v.edge != e:
        return None
    comp = next(c for c in connected_components(xm) if c.meets(final))
    ivs = comp.edges.get(e, ())
    iv = next(((a, b) for a, b in ivs if a <= tv <= b
               or min(abs(a - tv), abs(b - tv)) <= _diam(final) / edge.length), None)
    if iv is None:
        return None
    tu = iv[0] if abs(iv[0] - tv) > abs(iv[1] - tv) else iv[1]
    if tu == tv:
        return None
    ok, checked = check_escape(f, e, tu, tv, grid_exp)
    if not ok:
        return None
    return EscapeArc(g.point(e, tu), v, e, checked)


def check_escape(f: PLMap, e, tu, tv, grid_exp=10):
    """Test ``f(x)`` strictly between ``x`` and ``v`` for ``x`` in ``[u, v)``.

    Samples ``2**grid_exp`` grid points and every breakpoint of ``f`` in the
    half-open arc.  Returns ``(ok, number_of_points_checked)``.
    """
    g = f.g
    n = 2 ** grid_exp
    ts = {tu + (tv - tu) * Fraction(j, n) for j in range(n)}
    lo, hi = min(tu, tv), max(tu, tv)
    ts.update(b for b in f.breakpoints(e) if lo <= b <= hi and b != tv)
    for t in ts:
        y = f.at_coord(e, t)
        if isinstance(y, EdgePoint):
            if y.edge != e:
                return False, len(ts)
            s = y.t
        else:
            s = _vertex_coord(g, e, y)
            if s is None:
                return False, len(ts)
        if not (min(t, tv) < s < max(t, tv)):
            return False, len(ts)
    return True, len(ts)


def _vertex_coord(g, e, y):
    edge = g.edges[e]
    if y.id == edge.u:
        return Fraction(0)
    if y.id == edge.v:
        return Fraction(1)
    return None

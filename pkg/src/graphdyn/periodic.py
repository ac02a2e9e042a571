"""Exact periodic and eventually periodic points of PL maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PieceBudgetExceeded
from .graph import GraphPoint
from .plmap import DEFAULT_PIECE_CAP, PLMap, PowerCache, identity
from .sets import ArcSet, point_key
from .topology import connected_components

ZERO = Fraction(0)


class SolutionSet:
    """Isolated solution points plus closed arcs of solutions."""

    def __init__(self, g, points=(), continua: ArcSet | None = None):
        self.g = g
        cont = continua if continua is not None else ArcSet.empty(g)
        fat = ArcSet(g, {e: [iv for iv in ivs if iv[0] < iv[1]] for e, ivs in cont.edges.items()})
        pts = set(points) | set(cont.closure_minus(fat).points())
        self.continua = fat
        self.points = sorted((p for p in pts if p not in fat), key=lambda x: point_key(g, x))

    def as_arcset(self) -> ArcSet:
        return self.continua.union(ArcSet.from_points(self.g, self.points))

    def __contains__(self, x):
        return x in self.continua or x in set(self.points)

    def __eq__(self, other):
        return isinstance(other, SolutionSet) and self.as_arcset() == other.as_arcset()

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"SolutionSet({len(self.points)} points, continua {self.continua.describe()})"

    def union(self, other):
        return SolutionSet(self.g, list(self.points) + list(other.points),
                           self.continua.union(other.continua))


def _affine(p):
    """``(A, B)`` with ``p.at(t) == A + B * t``."""
    if p.a == p.b:
        return p.a, ZERO
    B = (p.b - p.a) / (p.t1 - p.t0)
    return p.a - p.t0 * B, B


def coincidence(F: PLMap, H: PLMap) -> SolutionSet:
    """Exact solution set of ``F(x) = H(x)``."""
    g = F.g
    points = set()
    cont = {}
    for e in g.edges:
        bps = sorted(set(F.breakpoints(e)) | set(H.breakpoints(e)))
        for s0, s1 in zip(bps, bps[1:]):
            mid = (s0 + s1) / 2
            pf, ph = F.piece_at(e, mid), H.piece_at(e, mid)
            cands = [s0, s1]
            af, bf = _affine(pf)
            if pf.edge == ph.edge:
                ah, bh = _affine(ph)
                if bf == bh:
                    if af == ah:
                        cont.setdefault(e, []).append((s0, s1))
                        continue
                else:
                    cands.append((ah - af) / (bf - bh))
            else:
                # different target edges can only agree at a shared vertex
                for c in (ZERO, Fraction(1)):
                    if bf != 0:
                        cands.append((c - af) / bf)
            for t in cands:
                if s0 <= t <= s1:
                    x = g.point(e, t)
                    if x not in points and F.at_coord(e, t) == H.at_coord(e, t):
                        points.add(x)
    return SolutionSet(g, points, ArcSet(g, cont))


def fixed_points(fn: PLMap) -> SolutionSet:
    return coincidence(fn, identity(fn.g))


@dataclass
class PeriodicPoints:
    """Union of ``Fix(f^n)`` for ``n <= N`` with least periods."""

    solutions: SolutionSet
    periods: dict
    continua_periods: list
    N: int
    reached: int
    complete: bool
    error: str | None = None

    @property
    def points(self):
        return self.solutions.points

    def as_arcset(self):
        return self.solutions.as_arcset()

    def by_period(self):
        out = {}
        for p in self.solutions.points:
            out.setdefault(self.periods[p], []).append(p)
        return out


def least_period(f: PLMap, x: GraphPoint, bound: int):
    y = x
    for d in range(1, bound + 1):
        y = f(y)
        if y == x:
            return d
    return None


def periodic_points(f: PLMap, N: int, piece_cap=DEFAULT_PIECE_CAP, powers=None) -> PeriodicPoints:
    """Exact ``P_N``.  On a piece-budget overflow the partial result is flagged."""
    if N < 1:
        raise ValueError("N must be positive")
    powers = powers or PowerCache(f, piece_cap)
    g = f.g
    total = SolutionSet(g)
    periods = {}
    cperiods = []
    reached, error = 0, None
    for n in range(1, N + 1):
        try:
            fn = powers[n]
        except PieceBudgetExceeded as exc:
            error = str(exc)
            break
        sol = fixed_points(fn)
        for p in sol.points:
            if p not in periods and p not in total.continua:
                periods[p] = least_period(f, p, n)
        for comp in connected_components(sol.continua):
            if not comp.issubset(total.continua):
                cperiods.append((comp, n))
        total = total.union(sol)
        reached = n
    periods = {p: periods[p] for p in total.points if p in periods}
    for p in total.points:
        if p not in periods:
            periods[p] = least_period(f, p, reached)
    return PeriodicPoints(total, periods, cperiods, N, reached, reached == N, error)


def ep_n(f: PLMap, n: int, piece_cap=DEFAULT_PIECE_CAP, powers=None) -> SolutionSet:
    """Points whose orbit has at most ``n`` elements: ``f^i x = f^j x``, ``0 <= i < j <= n``."""
    if n < 1:
        raise ValueError("n must be positive")
    powers = powers or PowerCache(f, piece_cap)
    out = SolutionSet(f.g)
    for j in range(1, n + 1):
        for i in range(j):
            out = out.union(coincidence(powers[i], powers[j]))
    return out


@dataclass(frozen=True)
class Periodic:
    pre: int
    period: int
    resolved = True


@dataclass(frozen=True)
class Unresolved:
    horizon: int
    resolved = False


def eventually_periodic_test(f: PLMap, x: GraphPoint, horizon: int):
    """Exact repetition detection along the orbit up to ``horizon`` steps."""
    seen = {x: 0}
    y = x
    for i in range(1, horizon + 1):
        y = f(y)
        if y in seen:
            return Periodic(seen[y], i - seen[y])
        seen[y] = i
    return Unresolved(horizon)


@dataclass
class EPApproximant:
    """``P_N`` together with its preimages up to ``depth`` steps."""

    P: ArcSet
    EP: ArcSet
    N: int
    depth: int
    note: str = field(default="inner approximation of the closure of EP(f)")


def ep_approximant(f: PLMap, P: ArcSet, depth: int) -> EPApproximant:
    from .orbits import inverse_orbit

    return EPApproximant(P, inverse_orbit(f, P, depth) if P else P, 0, depth)

"""Decomposition of the recurrent points away from the periodic set.

Pipeline: exact ``P_N`` and a preimage approximant of the eventually
periodic set, a grid sample of eps-recurrent points away from it,
component-cyclic invariant sets grown from the samples, their strongly
invariant cores, depth-truncated absorbed neighbourhoods, circles and
eps-covers of the minimal sets, and clause-by-clause verdicts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

from .errors import (CoreBudgetExceeded, EntryHorizonExceeded, NoCandidates,
                     NoOverlapWithinHorizon, PieceBudgetExceeded, RotationNotRigid,
                     SeedInsideAvoid, StabilizationBudgetExceeded, UnsupportedCore)
from .graph import EdgePoint, GraphPoint, Vertex
from .orbits import NonStabilized, inverse_orbit, main_absorbed, orbit_stabilize
from .periodic import eventually_periodic_test, periodic_points
from .plmap import PLMap, PowerCache, image, power
from .recurrence import (almost_periodic_test, meets_open, orbit_points, recurrent_sample)
from .sets import ArcSet, OpenArcSet, SetDistance, hausdorff_within, neighborhood, set_distance
from .topology import (boundary, connected_components, find_circles, interior,
                       max_disjoint_circles, open_components)

F = Fraction


@dataclass
class Params:
    eps: Fraction = F(1, 100)
    horizon: int = 2000
    grid: int = 64
    period_cap: int = 12
    depth: int = 40
    ep_depth: int = 1
    stabilize_cap: int = 2000
    core_cap: int = 1000
    piece_cap: int = 100_000
    samples: int = 10
    seed: int = 0
    margin: Fraction = F(1, 1000)

    @classmethod
    def from_mapping(cls, mapping):
        p = cls()
        known = {f for f in cls.__dataclass_fields__}
        kw = {k: v for k, v in mapping.items() if k in known and v is not None}
        if "eps" in kw:
            kw["eps"] = F(kw["eps"])
        if "margin" in kw:
            kw["margin"] = F(kw["margin"])
        return replace(p, **kw)

    def items(self):
        return [(k, getattr(self, k)) for k in self.__dataclass_fields__]


@dataclass
class Verdict:
    name: str
    ok: bool
    kind: str
    detail: str = ""

    def __str__(self):
        return f"{self.name}: {'pass' if self.ok else 'FAIL'} [{self.kind}] {self.detail}".rstrip()


# component-cyclic sets -------------------------------------------------------

@dataclass
class ComponentCyclicSet:
    components: list
    seed: GraphPoint | None = None
    arc: ArcSet | None = None
    n: int | None = None

    @property
    def k(self):
        return len(self.components)

    @property
    def carrier(self) -> ArcSet:
        return self.components[0].union(*self.components[1:])

    def is_cyclic(self, f: PLMap) -> bool:
        """Exact check ``f(Y_j) ⊆ Y_{j+1 mod k}`` and pairwise disjointness."""
        comps = self.components
        for i, a in enumerate(comps):
            for b in comps[i + 1:]:
                if a.meets(b):
                    return False
        return all(image(f, comps[j]).issubset(comps[(j + 1) % self.k]) for j in range(self.k))


def _order_cyclic(f, comps, start):
    """Order components by following ``f`` from the one containing ``start``."""
    first = next(i for i, c in enumerate(comps) if c.meets(start))
    order = [first]
    while True:
        img = image(f, comps[order[-1]])
        nxt = [i for i, c in enumerate(comps) if img.meets(c)]
        if len(nxt) != 1:
            raise StabilizationBudgetExceeded("image of a component spreads over several components")
        if nxt[0] == first:
            break
        if nxt[0] in order:
            raise StabilizationBudgetExceeded("components are not permuted cyclically")
        order.append(nxt[0])
    return [comps[i] for i in order]


def _seed_arc(f, seed, avoid, eps):
    g = f.g
    marks = ArcSet.from_points(g, [Vertex(v) for v in g.vertices if Vertex(v) != seed])
    if avoid is not None and not avoid.is_empty():
        marks = marks.union(avoid)
    room = SetDistance(marks)(seed)
    r = min(F(eps), room / 2)
    if isinstance(seed, EdgePoint):
        e, t = seed.edge, seed.t
        return ArcSet.interval(g, e, t, min(F(1), t + r / g.edges[e].length))
    e, end = min(g.incident[seed.id], key=lambda ie: (g.edge_order[ie[0]], ie[1]))
    L = g.edges[e].length
    return ArcSet.interval(g, e, 0, r / L) if end == 0 else ArcSet.interval(g, e, 1 - r / L, 1)


def build_component_cyclic(f: PLMap, seed: GraphPoint, avoid: ArcSet | None, eps=F(1, 100),
                           horizon=2000, stabilize_cap=2000, piece_cap=100_000) -> ComponentCyclicSet:
    """Grow a component-cyclic invariant closed set through ``seed``.

    An arc ``A = [seed, y]`` free of vertices and of ``avoid`` is pushed
    forward until ``f^n(A)`` meets ``A``; the orbit of ``A`` under ``f^n``
    is stabilized and spread over ``f, ..., f^{n-1}``.
    """
    if avoid is not None and not avoid.is_empty():
        if SetDistance(avoid)(seed) <= eps:
            raise SeedInsideAvoid(f"{seed} lies within {eps} of the avoided set")
    arc = _seed_arc(f, seed, avoid, eps)
    cur = arc
    n = None
    for i in range(1, horizon + 1):
        cur = image(f, cur)
        if cur.meets(arc):
            n = i
            break
    if n is None:
        raise NoOverlapWithinHorizon(f"no image of the seed arc at {seed} returns within {horizon}")
    try:
        fn = power(f, n, piece_cap)
    except PieceBudgetExceeded:
        fn = None
    if fn is not None:
        res = orbit_stabilize(fn, arc, stabilize_cap)
    else:
        res = _stabilize_by_iteration(f, n, arc, stabilize_cap)
    if isinstance(res, NonStabilized):
        raise StabilizationBudgetExceeded(f"orbit of the seed arc under f^{n} does not stabilize "
                                          f"within {stabilize_cap} steps")
    z = res.X
    y, cur = z, z
    for _ in range(n - 1):
        cur = image(f, cur)
        y = y.union(cur)
    comps = _order_cyclic(f, connected_components(y), ArcSet.from_points(f.g, [seed]))
    return ComponentCyclicSet(comps, seed, arc, n)


def _stabilize_by_iteration(f, n, arc, cap):
    from .orbits import Stabilized

    x = arc
    for j in range(cap):
        cur = x
        for _ in range(n):
            cur = image(f, cur)
        nxt = arc.union(cur)
        if nxt == x:
            return Stabilized(x, j)
        x = nxt
    return NonStabilized(x, cap)


class _Disjoint:
    def __repr__(self):
        return "Disjoint"

    def __bool__(self):
        return False


Disjoint = _Disjoint()


def union_if_meeting(f: PLMap, a: ComponentCyclicSet, b: ComponentCyclicSet):
    """Merged component-cyclic set when the carriers meet, else ``Disjoint``."""
    if not a.carrier.meets(b.carrier):
        return Disjoint
    u = a.carrier.union(b.carrier)
    start = a.components[0]
    comps = _order_cyclic(f, connected_components(u), start)
    merged = ComponentCyclicSet(comps, a.seed, a.arc, a.n)
    assert gcd(a.k, b.k) % merged.k == 0
    return merged


def strongly_invariant_core(f: PLMap, y: ComponentCyclicSet, cap=1000) -> list:
    """Cores ``G_j`` with ``f^k(G_1) = G_1`` and ``f(G_j) = G_{j+1}``."""
    k = y.k

    def fk(s):
        for _ in range(k):
            s = image(f, s)
        return s

    x = y.components[0]
    for _ in range(cap):
        nxt = fk(x)
        if nxt == x:
            break
        x = nxt
    else:
        raise CoreBudgetExceeded(f"descending image chain did not settle within {cap} steps")
    cores = [x]
    for _ in range(k - 1):
        cores.append(image(f, cores[-1]))
    if image(f, cores[-1]) != cores[0]:
        raise CoreBudgetExceeded("cores are not carried onto each other exactly")
    return cores


# report -----------------------------------------------------------------------

@dataclass
class ClassRecord:
    index: int
    k: int
    components: list          # truncated absorbed sets U_ij, as OpenArcSets
    closed_components: list   # their closed depth truncations
    cores: list               # G_ij
    circles: list             # C_ij (first circle found in each core)
    covers: list              # W_ij
    cyclic: ComponentCyclicSet
    stabilized: list = field(default_factory=list)
    entry_times: dict = field(default_factory=dict)

    @property
    def cover(self) -> ArcSet:
        return self.covers[0].union(*self.covers[1:])

    @property
    def core(self) -> ArcSet:
        return self.cores[0].union(*self.cores[1:])

    @property
    def region(self) -> ArcSet:
        return self.closed_components[0].union(*self.closed_components[1:])


@dataclass
class DecompositionReport:
    system: str
    params: Params
    P: ArcSet
    period_reached: int
    EP: ArcSet
    sample: list
    raw_sample: list
    classes: list
    verdicts: list
    regime: str = ""
    U0: ArcSet | None = None
    notes: list = field(default_factory=list)

    @property
    def n(self):
        return len(self.classes)

    @property
    def ok(self):
        return all(v.ok for v in self.verdicts)

    def verdict(self, name):
        return next(v for v in self.verdicts if v.name == name)


def _regime(g, P, eps):
    if not find_circles(ArcSet.whole(g)):
        return "tree regime: the graph has no circle, so cl R = cl P"
    thick = neighborhood(P, eps) if P else P
    rest = ArcSet.whole(g).closure_minus(thick) if thick else ArcSet.whole(g)
    if not find_circles(rest):
        return "no circle outside the thickened periodic set, so cl R = cl P"
    return "circles remain outside the thickened periodic set but no recurrent seed was found"


def _tail_cover(f, x0, eps, burn, N):
    return neighborhood(ArcSet.from_points(f.g, orbit_points(f, x0, burn, N)), eps)


def decompose(f: PLMap, params: Params | None = None, name: str = "", powers=None) -> DecompositionReport:
    p = params or Params()
    g = f.g
    eps, N = p.eps, p.horizon
    powers = powers or PowerCache(f, p.piece_cap)
    notes = []
    pp = periodic_points(f, p.period_cap, p.piece_cap, powers)
    if not pp.complete:
        notes.append(f"periodic points solved only up to period {pp.reached} ({pp.error})")
    P = pp.as_arcset()
    EP = inverse_orbit(f, P, p.ep_depth) if P else P
    notes.append(f"EP approximant: preimages of P_{pp.reached} to depth {p.ep_depth} "
                 "(inner approximation)")
    raw = recurrent_sample(f, p.grid, eps, N)
    dist_ep = SetDistance(EP) if EP else None
    sample = [x for x in raw if dist_ep is None or dist_ep(x) > eps]
    if dist_ep is not None:
        # slow escapers: eps-recurrent on the grid, but the orbit tail is trapped near EP
        trapped = [x for x in sample
                   if all(dist_ep(y) <= eps for y in orbit_points(f, x, N - 20, N))]
        if trapped:
            notes.append(f"{len(trapped)} grid seeds dropped: orbit tail stays within eps of EP")
        sample = [x for x in sample if x not in trapped]

    if not sample:
        report = DecompositionReport(name, p, P, pp.reached, EP, sample, raw, [], [],
                                     _regime(g, P, eps), ArcSet.whole(g), notes)
        report.verdicts = [Verdict("candidates", True, "exact",
                                   "no eps-recurrent grid point away from the EP approximant; "
                                   + report.regime)]
        raise NoCandidates("no recurrent candidates outside the periodic set", report)

    cyclics, failures = [], []
    for x in sample:
        if any(x in c.carrier for c in cyclics):
            continue
        try:
            y = build_component_cyclic(f, x, EP, eps, N, p.stabilize_cap, p.piece_cap)
        except (NoOverlapWithinHorizon, StabilizationBudgetExceeded, SeedInsideAvoid,
                PieceBudgetExceeded) as exc:
            failures.append((x, exc))
            continue
        merged = True
        while merged:
            merged = False
            for i, c in enumerate(cyclics):
                u = union_if_meeting(f, c, y)
                if u:
                    y = u
                    del cyclics[i]
                    merged = True
                    break
        cyclics.append(y)
    cyclics.sort(key=lambda c: sample.index(c.seed) if c.seed in sample else 0)

    classes = []
    for idx, y in enumerate(cyclics, 1):
        cores = strongly_invariant_core(f, y, p.core_cap)
        fk = powers[y.k]
        comps, closed, flags = [], [], []
        for core in cores:
            ab = main_absorbed(fk, core, p.depth, check=False)
            closed.append(ab.X)
            comps.append(interior(ab.X))
            flags.append(ab.stabilized)
        circles = []
        for core in cores:
            cs = find_circles(core)
            circles.append(cs[0] if cs else ArcSet.empty(g))
        x0 = y.seed
        tail = _tail_cover(f, x0, eps, N // 10, N)
        covers = [tail.intersection(core) for core in cores]
        classes.append(ClassRecord(idx, y.k, comps, closed, cores, circles, covers, y,
                                   flags))

    union_regions = ArcSet.empty(g).union(*[c.region for c in classes])
    report = DecompositionReport(name, p, P, pp.reached, EP, sample, raw, classes, [],
                                 "", ArcSet.whole(g).closure_minus(union_regions), notes)
    report.verdicts = _clauses(f, report, powers)
    if failures:
        report.verdicts.append(Verdict(
            "seeds", False, "budget",
            f"{len(failures)} seeds failed: "
            + "; ".join(f"{x}: {type(e).__name__}" for x, e in failures[:5])))
    return report


def _clauses(f, report, powers):
    p = report.params
    g = f.g
    eps, N = p.eps, p.horizon
    out = []
    classes = report.classes

    # (1) invariance of the truncated absorbed regions
    bad = [c.index for c in classes if not image(f, c.region).issubset(c.region)]
    disjoint = all(not a.region.meets(b.region) or not _open_meet(a, b)
                   for i, a in enumerate(classes) for b in classes[i + 1:])
    out.append(Verdict("clause1", not bad and disjoint, "exact",
                       f"f(U_i) in U_i on depth-{p.depth} truncation; classes disjoint={disjoint}"
                       + (f"; fails for {bad}" if bad else "")))

    # (2) U avoids the periodic set; its boundary is eventually periodic or at the frontier
    ok2, detail = True, []
    for c in classes:
        for u, cl in zip(c.components, c.closed_components):
            if meets_open(report.P, u) or (report.EP and meets_open(report.EP, u)):
                ok2 = False
                detail.append(f"class {c.index} meets the periodic approximant")
        prev = [main_absorbed(powers[c.k], core, p.depth - 1, check=False).X for core in c.cores]
        stable_pts = set()
        for cl, pv in zip(c.closed_components, prev):
            stable_pts |= set(boundary(cl).points()) & set(boundary(pv).points())
        moving = set(boundary(c.region).points()) - stable_pts
        for b in sorted(stable_pts, key=str):
            if not eventually_periodic_test(f, b, N).resolved:
                ok2 = False
                detail.append(f"boundary point {b} not eventually periodic within {N}")
        dist_ep = SetDistance(report.EP) if report.EP else None
        far = [b for b in moving if dist_ep is None or dist_ep(b) > eps]
        if far:
            ok2 = False
            detail.append(f"{len(far)} frontier points farther than eps from the EP approximant")
        detail.append(f"class {c.index}: {len(stable_pts)} stable boundary points, "
                      f"{len(moving)} moving frontier points")
    out.append(Verdict("clause2", ok2, "exact", "; ".join(detail)))

    # (3) cyclic permutation of components
    ok3, detail = True, []
    for c in classes:
        k = c.k
        cyc = c.cyclic.is_cyclic(f)
        cores = all(image(f, c.cores[j]) == c.cores[(j + 1) % k] for j in range(k))
        regions = all(image(f, c.closed_components[j]).issubset(c.closed_components[(j + 1) % k])
                      for j in range(k))
        ok3 &= cyc and cores and regions
        detail.append(f"class {c.index}: k={k} Y cyclic={cyc} cores exact={cores} "
                      f"regions={regions}")
    out.append(Verdict("clause3", ok3, "exact", "; ".join(detail)))

    # (4) uniqueness of the minimal cover; (6) attraction
    rng = random.Random(p.seed)
    ok4, ok6, d4, d6 = True, True, [], []
    for c in classes:
        core = c.core
        pts = _attraction_points(f, c, report)
        chosen = rng.sample(pts, min(p.samples, len(pts))) if pts else []
        agree = 0
        for x in chosen:
            cov = _tail_cover(f, x, eps, N // 10, N).intersection(core)
            if hausdorff_within(cov, c.cover, eps):
                agree += 1
        ok4 &= agree == len(chosen) and bool(chosen)
        d4.append(f"class {c.index}: {agree}/{len(chosen)} sampled covers within eps")
        worst = 0
        missing = 0
        for x in pts:
            t = _entry_time(f, x, core, N)
            if t is None:
                missing += 1
            else:
                c.entry_times[x] = t
                worst = max(worst, t)
        ok6 &= missing == 0
        d6.append(f"class {c.index}: {len(pts) - missing}/{len(pts)} grid points enter the core "
                  f"(max entry time {worst})")
    out.append(Verdict("clause4", ok4, "eps", "; ".join(d4)))

    # (5) exact cores, eps-invariant covers, circles present
    ok5, detail = True, []
    for c in classes:
        k = c.k
        cores = all(image(f, c.cores[j]) == c.cores[(j + 1) % k] for j in range(k))
        covers = all(image(f, c.covers[j]).issubset(neighborhood(c.covers[(j + 1) % k], eps))
                     for j in range(k))
        circ = all(not ci.is_empty() for ci in c.circles)
        ok5 &= cores and covers and circ
        detail.append(f"class {c.index}: f(G) exact={cores} f(W) in thick(W)={covers} "
                      f"circles={circ}")
    out.append(Verdict("clause5", ok5, "exact+eps", "; ".join(detail)))
    out.append(Verdict("clause6", ok6, "exact", "; ".join(d6)))
    return out


def _open_meet(a, b):
    return any(meets_open(x.carrier, y) for x in a.components for y in b.components)


def _attraction_points(f, c, report):
    """Grid points of the truncated region at distance >= margin from its boundary and P."""
    p = report.params
    marks = boundary(c.region)
    if report.P:
        marks = marks.union(report.P)
    d = SetDistance(marks) if marks else None
    pts = []
    for u in c.components:
        pts.extend(x for x in u.grid(p.grid) if d is None or d(x) >= p.margin)
    return pts


def _entry_time(f, x, target: ArcSet, horizon):
    y = x
    for m in range(horizon + 1):
        if y in target:
            return m
        y = f(y)
    return None


# semi-conjugacy -----------------------------------------------------------------

class CircleChart:
    """Arclength chart of a circle onto ``[0, 1)``, starting at its first vertex."""

    def __init__(self, g, circle: ArcSet):
        edges = list(circle.edges)
        verts = sorted({g.edges[e].u for e in edges} | {g.edges[e].v for e in edges},
                       key=g.vertex_order.__getitem__)
        start = verts[0]
        order = []
        at, used = start, set()
        while len(order) < len(edges):
            e = min((e for e in edges if e not in used
                     and at in (g.edges[e].u, g.edges[e].v)), key=g.edge_order.__getitem__)
            used.add(e)
            fwd = g.edges[e].u == at
            order.append((e, fwd))
            at = g.edges[e].v if fwd else g.edges[e].u
        self.g = g
        self.order = order
        self.total = sum((g.edges[e].length for e, _ in order), F(0))
        self.offset = {}
        acc = F(0)
        for e, fwd in order:
            self.offset[e] = (acc, fwd)
            acc += g.edges[e].length
        self.start = start

    def __call__(self, x: GraphPoint) -> Fraction:
        g = self.g
        if isinstance(x, Vertex):
            for e, (acc, fwd) in self.offset.items():
                if g.edges[e].u == x.id:
                    return (acc if fwd else acc + g.edges[e].length) / self.total % 1
                if g.edges[e].v == x.id:
                    return (acc + g.edges[e].length if fwd else acc) / self.total % 1
            raise ValueError(f"{x} is not on the circle")
        acc, fwd = self.offset[x.edge]
        t = x.t if fwd else 1 - x.t
        return (acc + t * g.edges[x.edge].length) / self.total % 1


@dataclass
class SemiConjugacy:
    class_index: int
    component: int
    k: int
    circle: ArcSet
    chart: CircleChart
    rho: Fraction
    fk: PLMap
    horizon: int
    table: dict = field(default_factory=dict)
    entry: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def h(self, s):
        return (s + self.rho) % 1

    def entry_time(self, x):
        if x in self.entry:
            return self.entry[x]
        y = x
        for n in range(self.horizon + 1):
            if y in self.circle:
                self.entry[x] = n
                return n
            y = self.fk(y)
        raise EntryHorizonExceeded(x, self.horizon)

    def psi_at(self, x, n):
        """``h^{-n} φ f^{kn}(x)`` for an explicit ``n`` at or past the entry time."""
        y = x
        for _ in range(n):
            y = self.fk(y)
        return (self.chart(y) - n * self.rho) % 1

    def psi(self, x):
        if x in self.table:
            return self.table[x]
        val = self.psi_at(x, self.entry_time(x))
        self.table[x] = val
        return val

    def check_point(self, x):
        """(conjugacy identity holds, value independent of n vs n+1)."""
        n = self.entry_time(x)
        v = self.psi(x)
        same = self.psi_at(x, n + 1) == v
        conj = self.h(v) == self.psi(self.fk(x))
        return conj, same


def build_semiconjugacy(f: PLMap, report: DecompositionReport, i: int = 1, horizon=200,
                        grid=None, component=1) -> SemiConjugacy:
    c = report.classes[i - 1]
    j = component - 1
    core = c.cores[j]
    circles = find_circles(core)
    if len(circles) != 1 or circles[0] != core:
        raise UnsupportedCore(f"core of class {i} component {component} is not a single circle")
    circle = circles[0]
    chart = CircleChart(f.g, circle)
    fk = power(f, c.k)
    rho = None
    for e in circle.edges:
        for p in fk.pieces[e]:
            for t in (p.t0, (p.t0 + p.t1) / 2, p.t1):
                x = f.g.point(e, t)
                d = (chart(fk(x)) - chart(x)) % 1
                if rho is None:
                    rho = d
                elif d != rho:
                    raise RotationNotRigid(f"displacement varies on the circle ({rho} vs {d})")
    sc = SemiConjugacy(i, component, c.k, circle, chart, rho, fk, horizon)
    pts = c.components[j].grid(grid or report.params.grid)
    for x in pts:
        try:
            sc.psi(x)
        except EntryHorizonExceeded:
            sc.skipped.append(x)
    return sc


# corollaries ---------------------------------------------------------------------

def verify_corollaries(f: PLMap, report: DecompositionReport, params: Params | None = None):
    p = params or report.params
    g = f.g
    eps = p.eps
    out = []
    m = max_disjoint_circles(g)
    out.append(Verdict("4.1", report.n <= m, "exact",
                       f"classes n={report.n} <= max disjoint circles {m}"))

    P = report.P
    thickP = neighborhood(P, eps) if P else P
    if report.classes:
        W = ArcSet.empty(g).union(*[c.cover for c in report.classes])
        d0 = set_distance(W, P) if P else None
        d1 = set_distance(W, thickP) if P else None
        ok = d1 is None or d1 > 0
        out.append(Verdict("4.7", ok, "exact",
                           f"d(W, P_N) = {d0}, d(W, thick P_N) = {d1}"))
    else:
        out.append(Verdict("4.7", True, "exact", "no classes"))

    # 4.2: near R and near EP implies near P
    R = ArcSet.from_points(g, report.raw_sample)
    bad = 0
    if R and report.EP:
        dR, dE, dP = SetDistance(R), SetDistance(report.EP), SetDistance(P) if P else None
        for x in ArcSet.whole(g).grid(p.grid):
            if dR(x) <= eps and dE(x) <= eps and (dP is None or dP(x) > eps):
                bad += 1
    out.append(Verdict("4.2", bad == 0, "eps",
                       f"{bad} grid points near R and EP but not near P_N"))

    # 4.9/4.10: no circle outside the thickened periodic set => no candidates
    rest = ArcSet.whole(g).closure_minus(thickP) if P else ArcSet.whole(g)
    no_circle = not find_circles(rest)
    ok = (not no_circle) or not report.sample
    out.append(Verdict("4.9/4.10", ok, "implication",
                       f"circle outside thick P_N: {not no_circle}; candidates: {len(report.sample)}"
                       + ("; tree regime" if no_circle else "")))

    # 4.11: [p, w] meets Br(G)
    br = {v for v in g.branching_points()}
    bad = 0
    checked = 0
    if report.classes and P:
        cut = OpenArcSet(ArcSet.whole(g), br)
        pieces = open_components(cut)
        for c in report.classes:
            # orbit-tail points of the seed shadow the minimal set; raw grid
            # samples can be slow escapers that are only eps-recurrent
            tail = orbit_points(f, c.cyclic.seed, p.horizon - 50, p.horizon)
            ws = sorted(set(tail), key=str)
            for w in ws:
                for q in P.extreme_points():
                    checked += 1
                    if q in br or w in br:
                        continue
                    if any(q in comp and w in comp for comp in pieces):
                        bad += 1
    out.append(Verdict("4.11", bad == 0, "exact",
                       f"{checked} (p, w) pairs, {bad} joined by an arc avoiding Br(G)"))

    # 4.4: sampled recurrent points are almost periodic or near P_N
    dP = SetDistance(P) if P else None
    rng = random.Random(p.seed)
    raw = list(report.raw_sample)
    chosen = rng.sample(raw, min(p.samples, len(raw))) if raw else []
    bad = 0
    for x in chosen:
        near_p = dP is not None and dP(x) <= eps
        if not near_p and not almost_periodic_test(f, x, eps, p.horizon).witnessed:
            bad += 1
    out.append(Verdict("4.4", bad == 0, "implication",
                       f"{len(chosen) - bad}/{len(chosen)} sampled recurrent points are "
                       "almost periodic or near P_N"))

    # 4.8: recurrent sample eps-dense and P nonempty => P_N eps-dense
    grid = ArcSet.whole(g).grid(p.grid)
    dense_r = bool(R) and all(SetDistance(R)(x) <= eps for x in grid)
    dense_p = bool(P) and all(dP(x) <= eps for x in grid)
    ok = (not (dense_r and P)) or dense_p
    out.append(Verdict("4.8", ok, "implication",
                       f"recurrent sample eps-dense: {dense_r}; P_N eps-dense: {dense_p}"))
    return out


def shuffle_invariant(f, report, seed=1):
    """Recompute the class carriers from the sample in a shuffled order."""
    p = report.params
    order = list(report.sample)
    random.Random(seed).shuffle(order)
    cyclics = []
    for x in order:
        if any(x in c.carrier for c in cyclics):
            continue
        y = build_component_cyclic(f, x, report.EP, p.eps, p.horizon, p.stabilize_cap, p.piece_cap)
        merged = True
        while merged:
            merged = False
            for i, c in enumerate(cyclics):
                u = union_if_meeting(f, c, y)
                if u:
                    y = u
                    del cyclics[i]
                    merged = True
                    break
        cyclics.append(y)
    return {c.carrier for c in cyclics}

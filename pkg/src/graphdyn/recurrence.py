"""Finite-scale recurrence tests.

Every test runs at an explicit scale ``(eps, N)``.  A ``Witnessed`` verdict
is an exact certificate (the stated inequality holds for the exact orbit);
``NotWitnessed`` only says nothing was found.  ``nonwandering_test`` works
with exact images of the ball, so its negative verdict is a certificate at
that scale.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import GraphPoint
from .plmap import PLMap, image
from .sets import ArcSet, OpenArcSet, SetDistance, neighborhood
from .topology import ball

WITNESSED = "Witnessed"
NOT_WITNESSED = "NotWitnessed"
CERTIFIED_NOT_RETURNING = "CertifiedNotReturning"


@dataclass
class RecurrenceVerdict:
    point: GraphPoint
    eps: Fraction
    horizon: int
    verdict: str
    value: int | None = None
    chain: list = field(default_factory=list, repr=False)

    @property
    def witnessed(self):
        return self.verdict == WITNESSED

    def __str__(self):
        if self.witnessed:
            return f"{self.verdict}({self.value})"
        return self.verdict


def eps_recurrent(f: PLMap, x: GraphPoint, eps, N: int) -> RecurrenceVerdict:
    """Least ``1 <= k <= N`` with ``d(f^k x, x) < eps``."""
    eps = Fraction(eps)
    g = f.g
    y = x
    for k in range(1, N + 1):
        y = f(y)
        if g.distance(x, y) < eps:
            return RecurrenceVerdict(x, eps, N, WITNESSED, k)
    return RecurrenceVerdict(x, eps, N, NOT_WITNESSED)


def orbit_points(f: PLMap, x: GraphPoint, start: int, stop: int) -> list:
    """``[f^start x, ..., f^stop x]``."""
    y = x
    for _ in range(start):
        y = f(y)
    out = [y]
    for _ in range(stop - start):
        y = f(y)
        out.append(y)
    return out


def omega_limit_cover(f: PLMap, x: GraphPoint, eps, burn=None, N: int = 2000) -> ArcSet:
    """Closed ``eps``-neighborhood of ``{f^i x : burn <= i <= N}``.

    An outer cover of the omega-limit set whenever the orbit tail past
    ``burn`` already shadows it at scale ``eps``.
    """
    if burn is None:
        burn = N // 10
    if not burn < N:
        raise ValueError("burn-in must be below N")
    pts = orbit_points(f, x, burn, N)
    return neighborhood(ArcSet.from_points(f.g, pts), eps)


def almost_periodic_test(f: PLMap, x: GraphPoint, eps, N: int) -> RecurrenceVerdict:
    """Least window length ``m`` such that every window of ``m`` consecutive
    iterates among ``f^1 x .. f^N x`` meets the open ``eps``-ball at ``x``."""
    eps = Fraction(eps)
    g = f.g
    hits = [0]
    y = x
    for k in range(1, N + 1):
        y = f(y)
        if g.distance(x, y) < eps:
            hits.append(k)
    hits.append(N + 1)
    m = max(b - a for a, b in zip(hits, hits[1:]))
    if m <= N:
        return RecurrenceVerdict(x, eps, N, WITNESSED, m)
    return RecurrenceVerdict(x, eps, N, NOT_WITNESSED)


def meets_open(a: ArcSet, u: OpenArcSet) -> bool:
    """Whether the closed set ``a`` meets ``carrier - deleted``."""
    inter = a.intersection(u.carrier)
    if any(lo < hi for ivs in inter.edges.values() for lo, hi in ivs):
        return True
    # what is left is a finite set of points
    return any(p not in u.deleted for p in inter.extreme_points())


def nonwandering_test(f: PLMap, x: GraphPoint, eps, N: int, keep_chain=False) -> RecurrenceVerdict:
    """First ``n <= N`` with ``f^n(B) \\cap B`` nonempty, ``B`` the open ``eps``-ball.

    ``f^n`` of the closed ball is the closure of ``f^n(B)``, and ``B`` is open,
    so testing the closed image against the open ball is exact.
    """
    eps = Fraction(eps)
    b = ball(f.g, x, eps)
    cur = b.carrier
    chain = []
    for n in range(1, N + 1):
        nxt = image(f, cur)
        if keep_chain:
            chain.append(nxt)
        if meets_open(nxt, b):
            return RecurrenceVerdict(x, eps, N, WITNESSED, n, chain)
        if nxt == cur:
            # the image chain is constant from here on
            if keep_chain:
                chain.extend([nxt] * (N - n))
            break
        cur = nxt
    return RecurrenceVerdict(x, eps, N, CERTIFIED_NOT_RETURNING, None, chain)


def replay_certificate(f: PLMap, verdict: RecurrenceVerdict) -> bool:
    """Recompute the image chain and check it against the stored one."""
    b = ball(f.g, verdict.point, verdict.eps)
    cur = b.carrier
    last = len(verdict.chain) - 1
    for i, stored in enumerate(verdict.chain):
        cur = image(f, cur)
        if cur != stored:
            return False
        if meets_open(cur, b) != (verdict.witnessed and i == last):
            return False
    return True


def threads():
    try:
        return max(1, int(os.environ.get("GRAPHDYN_THREADS", "1")))
    except ValueError:
        return 1


def _recurrent_job(args):
    f, x, eps, N = args
    return eps_recurrent(f, x, eps, N).witnessed


def recurrent_sample(f: PLMap, grid_density: int, eps, N: int, exclusion: ArcSet | None = None):
    """Grid points that are ``eps``-recurrent within ``N`` steps and lie at
    distance ``> eps`` from ``exclusion``.  Output is in grid order."""
    eps = Fraction(eps)
    pts = ArcSet.whole(f.g).grid(grid_density)
    if exclusion is not None and not exclusion.is_empty():
        dist = SetDistance(exclusion)
        pts = [x for x in pts if dist(x) > eps]
    jobs = [(f, x, eps, N) for x in pts]
    workers = threads()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            flags = list(ex.map(_recurrent_job, jobs, chunksize=16))
    else:
        flags = [_recurrent_job(j) for j in jobs]
    return [x for x, ok in zip(pts, flags) if ok]

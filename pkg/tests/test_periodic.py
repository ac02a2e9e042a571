from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from graphdyn.graph import Vertex
from graphdyn.periodic import (Periodic, coincidence, ep_n, ep_approximant,
                               eventually_periodic_test, fixed_points, periodic_points)
from graphdyn.plmap import identity, power
from graphdyn.sets import ArcSet
from strategies import I, interval_maps


def coords(points):
    out = set()
    for x in points:
        out.add(x.t if not isinstance(x, Vertex) else F(0 if x.id == "v0" else 1))
    return out


def test_tent_fixed_points(systems):
    f = systems["tent"].map
    assert coords(fixed_points(f).points) == {0, F(2, 3)}
    assert coords(fixed_points(power(f, 2)).points) == {0, F(2, 5), F(2, 3), F(4, 5)}


def test_identity_fixed_points_form_a_continuum(systems):
    g = systems["identity"].graph
    sol = fixed_points(identity(g))
    assert sol.points == [] and sol.as_arcset() == ArcSet.whole(g)


def test_rotation_periodic_points(systems):
    f = systems["rotation3"].map
    pp = periodic_points(f, 3)
    assert pp.points == [] and pp.as_arcset() == ArcSet.whole(f.g)
    assert [n for _, n in pp.continua_periods] == [3]
    assert periodic_points(f, 2).as_arcset().is_empty()


def test_tent_periods(systems):
    pp = periodic_points(systems["tent"].map, 2)
    by = {d: coords(pts) for d, pts in pp.by_period().items()}
    assert by == {1: {0, F(2, 3)}, 2: {F(2, 5), F(4, 5)}}
    assert pp.complete


def test_lollipop_periodic_points(systems):
    pp = periodic_points(systems["lollipop"].map, 5)
    assert pp.points == [Vertex("e")] and pp.solutions.continua.is_empty()


def test_budget_overflow_is_flagged(systems):
    pp = periodic_points(systems["tent"].map, 12, piece_cap=500)
    assert not pp.complete and pp.reached == 8 and pp.error


def test_ep_n(systems):
    f = systems["tent"].map
    assert coords(ep_n(f, 1).points) == {0, F(2, 3)}
    pts, arcs = set(), set()
    for j in (1, 2):
        for i in range(j):
            p, a = oracles.coincidences(oracles.TENT, i, j)
            pts |= p
            arcs |= a
    assert not arcs
    assert coords(ep_n(f, 2).points) == pts == {0, F(1, 3), F(2, 5), F(2, 3), F(4, 5), 1}
    g = systems["identity"].graph
    assert ep_n(identity(g), 3).as_arcset() == ArcSet.whole(g)


def test_eventually_periodic(systems):
    f = systems["tent"].map
    assert eventually_periodic_test(f, I.point("I", F(1, 5)), 10) == Periodic(1, 2)
    assert eventually_periodic_test(f, I.point("I", F(2, 3)), 10) == Periodic(0, 1)
    lol = systems["lollipop"].map
    res = eventually_periodic_test(lol, lol.g.point("C0", F(1, 7)), 10_000)
    assert not res.resolved


def test_ep_approximant(systems):
    f = systems["tent"].map
    P = periodic_points(f, 1).as_arcset()
    ep = ep_approximant(f, P, 1)
    assert coords(ep.EP.points()) == {0, F(1, 3), F(2, 3), 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_tent_power_matches_oracle(systems, n):
    sol = fixed_points(power(systems["tent"].map, n))
    pts, arcs = oracles.fixed_points(oracles.TENT, n)
    assert coords(sol.points) == pts and not arcs


def _as_arcset(pts, arcs):
    s = ArcSet(I, {"I": [(a, b) for a, b in arcs]})
    return s | ArcSet.from_points(I, [I.point("I", x) for x in pts])


@settings(max_examples=60, deadline=None)
@given(interval_maps(max_breaks=2), st.integers(1, 3))
def test_fixed_points_match_oracle(fx, n):
    f, xs, ys = fx
    brs = oracles.branches(xs, ys)
    assert fixed_points(power(f, n)).as_arcset() == _as_arcset(*oracles.fixed_points(brs, n))


@settings(max_examples=40, deadline=None)
@given(interval_maps(max_breaks=2), st.integers(0, 1), st.integers(2, 3))
def test_coincidence_matches_oracle(fx, i, j):
    f, xs, ys = fx
    brs = oracles.branches(xs, ys)
    got = coincidence(power(f, i) if i else identity(I), power(f, j)).as_arcset()
    assert got == _as_arcset(*oracles.coincidences(brs, i, j))


@settings(max_examples=40, deadline=None)
@given(interval_maps(max_breaks=2))
def test_periodic_points_are_periodic(fx):
    f = fx[0]
    pp = periodic_points(f, 3)
    for x in pp.points:
        d = pp.periods[x]
        y = x
        for _ in range(d):
            y = f(y)
        assert y == x and 1 <= d <= 3

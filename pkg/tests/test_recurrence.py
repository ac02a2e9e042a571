from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdyn.fixtures import GOLDEN
from graphdyn.graph import EdgePoint, Vertex
from graphdyn.periodic import periodic_points
from graphdyn.recurrence import (CERTIFIED_NOT_RETURNING, almost_periodic_test, eps_recurrent,
                                 nonwandering_test, omega_limit_cover, recurrent_sample,
                                 replay_certificate)
from graphdyn.sets import ArcSet, neighborhood
from strategies import I, interval_maps, q

EPS = F(1, 100)


def circle_dist(s):
    s %= 1
    return min(s, 1 - s)


def first_return(alpha, eps, N):
    """Rotation by ``alpha`` on the unit circle: first k with |k alpha| < eps."""
    return next((k for k in range(1, N + 1) if circle_dist(k * alpha) < eps), None)


def max_gap(alpha, eps, N):
    hits = [0] + [k for k in range(1, N + 1) if circle_dist(k * alpha) < eps] + [N + 1]
    return max(b - a for a, b in zip(hits, hits[1:]))


@pytest.fixture(scope="module")
def circle(systems):
    return systems["circle"].map


def test_rotation_first_return(circle):
    expected = first_return(GOLDEN, EPS, 100)
    assert expected in (55, 89)
    for t in (F(1, 7), F(1, 2), F(0)):
        x = circle.g.point("C0", t)
        v = eps_recurrent(circle, x, EPS, 100)
        assert v.witnessed and v.value == expected


def test_fixed_point_is_recurrent(systems):
    f = systems["tent"].map
    x = I.point("I", F(2, 3))
    assert eps_recurrent(f, x, EPS, 5).value == 1
    assert almost_periodic_test(f, x, EPS, 50).value == 1


def test_escape_point_not_recurrent(systems):
    f = systems["escape"].map
    x = I.point("I", F(1, 4))
    assert not eps_recurrent(f, x, F(1, 10), 100).witnessed
    assert not almost_periodic_test(f, x, EPS, 200).witnessed


def test_rotation_almost_periodic(circle):
    v = almost_periodic_test(circle, circle.g.point("C1", F(1, 3)), EPS, 2000)
    assert v.witnessed and v.value == max_gap(GOLDEN, EPS, 2000) <= 89


def test_omega_cover_two_cycle(systems):
    f = systems["tent"].map
    cover = omega_limit_cover(f, I.point("I", F(2, 5)), EPS, 10, 100)
    pts = ArcSet.from_points(I, [I.point("I", F(2, 5)), I.point("I", F(4, 5))])
    assert cover == neighborhood(pts, EPS)


def test_omega_cover_rotation(circle):
    cover = omega_limit_cover(circle, circle.g.point("C0", F(1, 7)), F(1, 50), 100, 5000)
    assert cover == ArcSet.whole(circle.g)


def test_omega_cover_pendant_point(systems):
    f = systems["lollipop"].map
    g = f.g
    circle = ArcSet.full_edges(g, ["C0", "C1", "C2"])
    cover = omega_limit_cover(f, g.point("P", F(1, 2)), EPS, 100, 1000)
    assert cover <= neighborhood(circle, EPS)


def test_omega_cover_rejects_bad_burn(circle):
    with pytest.raises(ValueError):
        omega_limit_cover(circle, Vertex("c0"), EPS, 10, 10)


def test_nonwandering_periodic_point(systems):
    f = systems["tent"].map
    v = nonwandering_test(f, I.point("I", F(2, 5)), EPS, 10)
    assert v.witnessed and v.value == 2


def test_nonwandering_certificate(systems):
    f = systems["escape"].map
    v = nonwandering_test(f, I.point("I", F(1, 4)), EPS, 50, keep_chain=True)
    assert v.verdict == CERTIFIED_NOT_RETURNING
    assert len(v.chain) == 50
    assert replay_certificate(f, v)


def test_tampered_certificate_fails(systems):
    f = systems["escape"].map
    v = nonwandering_test(f, I.point("I", F(1, 4)), EPS, 20, keep_chain=True)
    v.chain[5] = ArcSet.whole(I)
    assert not replay_certificate(f, v)


def test_nonwandering_rotation(circle):
    v = nonwandering_test(circle, circle.g.point("C2", F(1, 2)), EPS, 100)
    assert v.witnessed and v.value <= 89


def test_recurrent_sample_tent(systems):
    f = systems["tent"].map
    P = periodic_points(f, 12).as_arcset()
    assert len(recurrent_sample(f, 64, EPS, 2000, P)) <= 2


def test_recurrent_sample_lollipop(systems):
    f = systems["lollipop"].map
    g = f.g
    e = ArcSet.from_points(g, [Vertex("e")])
    sample = recurrent_sample(f, 64, EPS, 2000, e)
    on_circle = ArcSet.full_edges(g, ["C0", "C1", "C2"]).grid(64)
    assert set(on_circle) <= set(sample)
    # P:1/64 moves by 1/128 < eps in one step: a genuine eps-recurrence at this scale
    assert set(sample) - set(on_circle) == {EdgePoint("P", F(1, 64))}


def test_recurrent_sample_identity(systems):
    f = systems["identity"].map
    assert recurrent_sample(f, 8, EPS, 5, ArcSet.whole(f.g)) == []


def test_recurrent_sample_threads_agree(systems, monkeypatch):
    f = systems["whisker"].map
    serial = recurrent_sample(f, 16, EPS, 300)
    monkeypatch.setenv("GRAPHDYN_THREADS", "2")
    assert recurrent_sample(f, 16, EPS, 300) == serial


@settings(max_examples=40, deadline=None)
@given(interval_maps(), q)
def test_recurrence_hierarchy(fx, t):
    f = fx[0]
    x = I.point("I", t)
    eps, N = F(1, 20), 150
    ap = almost_periodic_test(f, x, eps, N)
    rec = eps_recurrent(f, x, eps, N)
    if ap.witnessed:
        assert rec.witnessed
    if rec.witnessed:
        nw = nonwandering_test(f, x, eps, N)
        assert nw.witnessed and nw.value <= rec.value

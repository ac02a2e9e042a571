from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from graphdyn.graph import EdgePoint, Graph, Vertex
from graphdyn.sets import (ArcSet, OpenArcSet, SetDistance, hausdorff_within, neighborhood,
                           set_distance)

G = Graph(["a", "b", "c", "e"], [("ab", "a", "b", 1), ("bc", "b", "c", 2),
                                 ("ca", "c", "a", 1), ("ea", "e", "a", 3)])
EDGES = list(G.edges)
q = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def arcsets(draw):
    ivs = {}
    for _ in range(draw(st.integers(0, 4))):
        e = draw(st.sampled_from(EDGES))
        a, b = sorted((draw(q), draw(q)))
        ivs.setdefault(e, []).append((a, b))
    verts = draw(st.sets(st.sampled_from(G.vertices), max_size=2))
    return ArcSet(G, ivs, verts)


@st.composite
def points(draw):
    return G.point(draw(st.sampled_from(EDGES)), draw(q))


def probe_points():
    return ArcSet.whole(G).grid(24)


def brute_distance(s, x):
    """Nearest point of a closed set lies on its frontier: scan the extreme points."""
    if x in s:
        return F(0)
    return min(G.distance(x, p) for p in s.extreme_points())


def test_normalization_merges_touching_intervals():
    s = ArcSet(G, {"ab": [(0, F(1, 2)), (F(1, 2), F(3, 4))]})
    assert s.edges == {"ab": ((0, F(3, 4)),)}
    assert "a" in s.vertices


def test_degenerate_end_interval_becomes_vertex():
    s = ArcSet(G, {"ab": [(1, 1)]})
    assert s.edges == {} and s.vertices == {"b"}
    assert s == ArcSet.from_points(G, [Vertex("b")])


def test_membership_at_vertices():
    s = ArcSet.interval(G, "ab", 0, F(1, 2))
    assert Vertex("a") in s
    assert G.point("ca", 1) in s
    assert Vertex("b") not in s


@settings(max_examples=150, deadline=None)
@given(arcsets(), arcsets())
def test_boolean_algebra_agrees_with_membership(a, b):
    u, i = a | b, a & b
    assert u == b | a and i == b & a
    assert i <= a and a <= u
    for x in probe_points():
        assert (x in u) == (x in a or x in b)
        assert (x in i) == (x in a and x in b)
    assert a.meets(b) == (not i.is_empty())


@settings(max_examples=150, deadline=None)
@given(arcsets(), arcsets())
def test_closure_minus(a, b):
    c = a.closure_minus(b)
    assert c <= a
    for x in probe_points():
        if x in a and x not in b:
            assert x in c


@settings(max_examples=150, deadline=None)
@given(arcsets().filter(bool), points())
def test_set_distance_matches_brute_force(s, x):
    assert SetDistance(s)(x) == brute_distance(s, x)


@settings(max_examples=80, deadline=None)
@given(arcsets().filter(bool), st.fractions(min_value=F(1, 20), max_value=2, max_denominator=20))
def test_neighborhoods_match_distance(s, r):
    d = SetDistance(s)
    closed = neighborhood(s, r)
    opened = d.open_neighborhood(r)
    assert s <= closed
    for x in probe_points():
        dx = brute_distance(s, x)
        assert (x in closed) == (dx <= r)
        assert (x in opened) == (dx < r)


def test_level_points_are_exactly_at_radius():
    s = ArcSet.from_points(G, [Vertex("a")])
    lv = SetDistance(s).level_points(F(1, 2))
    assert set(lv) == {EdgePoint("ab", F(1, 2)), EdgePoint("ca", F(1, 2)),
                       EdgePoint("ea", F(5, 6))}


def test_set_distance_between_sets():
    a = ArcSet.from_points(G, [Vertex("e")])
    b = ArcSet.interval(G, "bc", 0, 1)
    assert set_distance(a, b) == 4
    assert set_distance(a, a) == 0
    assert set_distance(a, ArcSet.empty(G)) is None


def test_hausdorff_within():
    a = ArcSet.interval(G, "bc", 0, F(1, 2))
    b = ArcSet.interval(G, "bc", 0, F(11, 20))
    assert hausdorff_within(a, b, F(1, 10))
    assert not hausdorff_within(a, b, F(1, 20))


def test_open_arcset_drops_isolated_deleted_points():
    s = ArcSet.from_points(G, [EdgePoint("ab", F(1, 2))]) | ArcSet.interval(G, "bc", 0, 1)
    u = OpenArcSet(s, [EdgePoint("ab", F(1, 2)), Vertex("c"), EdgePoint("ea", F(1, 2))])
    assert u.deleted == {Vertex("c")}
    assert EdgePoint("ab", F(1, 2)) not in u.carrier


def test_grid_contains_vertices_and_lattice_points():
    s = ArcSet.interval(G, "bc", F(1, 4), F(3, 4))
    assert [x.t for x in s.grid(4)] == [F(1, 4), F(1, 2), F(3, 4)]

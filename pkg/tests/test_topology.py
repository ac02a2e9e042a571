from fractions import Fraction as F

import pytest

from graphdyn.errors import NotConnected, NotOpen
from graphdyn.graph import EdgePoint, Graph, Vertex, validate_graph
from graphdyn.sets import ArcSet, OpenArcSet
from graphdyn.topology import (ball, boundary, closure, connected_components, find_circles,
                               interior, is_connected, is_open, max_disjoint_circles,
                               open_components, total_branching_number, xi)


def test_boundary_examples(triangle):
    s = ArcSet.interval(triangle, "ab", 0, F(1, 2))
    assert boundary(s) == ArcSet.from_points(triangle, [Vertex("a"), EdgePoint("ab", F(1, 2))])
    assert boundary(ArcSet.whole(triangle)).is_empty()
    p = ArcSet.from_points(triangle, [EdgePoint("bc", F(1, 3))])
    assert boundary(p) == p


def test_boundary_of_open_set(triangle):
    u = OpenArcSet(ArcSet.whole(triangle), [EdgePoint("ab", F(1, 2))])
    assert boundary(u) == ArcSet.from_points(triangle, [EdgePoint("ab", F(1, 2))])
    assert closure(u) == ArcSet.whole(triangle)


def test_interior_and_openness(triangle):
    s = ArcSet.interval(triangle, "ab", 0, F(1, 2))
    u = interior(s)
    assert Vertex("a") not in u and EdgePoint("ab", F(1, 4)) in u
    assert is_open(u)
    assert not is_open(OpenArcSet(s))


def test_components(triangle):
    two = ArcSet(triangle, {"ab": [(F(1, 10), F(2, 10)), (F(5, 10), F(6, 10))]})
    assert len(connected_components(two)) == 2
    assert connected_components(ArcSet.whole(triangle)) == [ArcSet.whole(triangle)]
    assert connected_components(ArcSet.empty(triangle)) == []
    assert not is_connected(two)


def test_components_join_through_vertices(triangle):
    s = ArcSet(triangle, {"ab": [(F(1, 2), 1)], "bc": [(0, F(1, 2))]})
    assert len(connected_components(s)) == 1


def test_open_components(triangle):
    u = OpenArcSet(ArcSet.whole(triangle), [Vertex("a"), Vertex("b")])
    assert len(open_components(u)) == 2


def test_total_branching_number(triangle, figure_eight, lollipop_graph):
    assert total_branching_number(triangle, ArcSet.whole(triangle)) == 0
    assert total_branching_number(figure_eight, ArcSet.whole(figure_eight)) == 2
    assert total_branching_number(lollipop_graph, ArcSet.whole(lollipop_graph)) == 1
    assert xi(lollipop_graph) == 1


def test_total_branching_number_rejects_bad_sets(triangle):
    with pytest.raises(NotOpen):
        total_branching_number(triangle, OpenArcSet(ArcSet.interval(triangle, "ab", 0, F(1, 2))))
    two = OpenArcSet(ArcSet(triangle, {"ab": [(F(1, 10), F(2, 10)), (F(5, 10), F(6, 10))]}),
                     [EdgePoint("ab", F(1, 10)), EdgePoint("ab", F(2, 10)),
                      EdgePoint("ab", F(5, 10)), EdgePoint("ab", F(6, 10))])
    with pytest.raises(NotConnected):
        total_branching_number(triangle, two)


def test_circles(triangle, figure_eight, lollipop_graph):
    assert find_circles(ArcSet.whole(triangle)) == [ArcSet.whole(triangle)]
    assert find_circles(ArcSet.full_edges(lollipop_graph, ["P"])) == []
    assert len(find_circles(ArcSet.whole(figure_eight))) >= 2


def test_partial_edges_carry_no_circle(triangle):
    s = ArcSet(triangle, {"ab": [(0, 1)], "bc": [(0, 1)], "ca": [(0, F(9, 10))]})
    assert find_circles(s) == []


def test_max_disjoint_circles(triangle, figure_eight):
    assert max_disjoint_circles(triangle) == 1
    assert max_disjoint_circles(figure_eight) == 1
    theta = validate_graph(Graph(["a", "b"], [("x", "a", "b", 2), ("y", "a", "b", 2),
                                             ("z", "a", "b", 2)]))
    assert max_disjoint_circles(theta) == 1
    two = Graph(list("abcdef"), [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1),
                                ("de", "d", "e", 1), ("ef", "e", "f", 1), ("fd", "f", "d", 1),
                                ("ad", "a", "d", 1)])
    assert max_disjoint_circles(two) == 2


def test_max_disjoint_circles_matches_pair_scan():
    # brute force over pairs of simple cycles of a small dumbbell-with-chord graph
    g = Graph(list("abcdef"), [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1),
                              ("cd", "c", "d", 1), ("de", "d", "e", 1), ("ef", "e", "f", 1),
                              ("fd", "f", "d", 1), ("be", "b", "e", 1)])
    circles = find_circles(ArcSet.whole(g))
    best = 1 if circles else 0
    for i, c1 in enumerate(circles):
        for c2 in circles[i + 1:]:
            if not c1.meets(c2):
                best = 2
    assert max_disjoint_circles(g) == best == 2


def test_ball_examples(triangle):
    b = ball(triangle, Vertex("a"), F(1, 2))
    assert b.carrier == ArcSet(triangle, {"ab": [(0, F(1, 2))], "ca": [(F(1, 2), 1)]})
    assert b.deleted == {EdgePoint("ab", F(1, 2)), EdgePoint("ca", F(1, 2))}
    assert ball(triangle, Vertex("a"), 10) == OpenArcSet(ArcSet.whole(triangle))
    x = EdgePoint("bc", F(1, 2))
    small = ball(triangle, x, F(1, 10))
    assert small.carrier == ArcSet.interval(triangle, "bc", F(2, 5), F(3, 5))
    assert is_open(small)

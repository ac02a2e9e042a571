from fractions import Fraction as F

import pytest

from graphdyn.decomposition import (ComponentCyclicSet, Disjoint, Params, build_component_cyclic,
                                    build_semiconjugacy, shuffle_invariant,
                                    strongly_invariant_core, union_if_meeting,
                                    verify_corollaries)
from graphdyn.errors import EntryHorizonExceeded, SeedInsideAvoid, UnsupportedCore
from graphdyn.fixtures import GOLDEN
from graphdyn.graph import EdgePoint, Vertex
from graphdyn.plmap import image, power
from graphdyn.sets import ArcSet, neighborhood
from graphdyn.topology import find_circles, max_disjoint_circles

EPS = F(1, 100)


def circle_of(g, prefix):
    return ArcSet.full_edges(g, [e for e in g.edges if e.startswith(prefix)])


def test_component_cyclic_on_the_circle(systems):
    f = systems["lollipop"].map
    g = f.g
    e = ArcSet.from_points(g, [Vertex("e")])
    y = build_component_cyclic(f, EdgePoint("C1", F(1, 3)), e, EPS)
    assert y.k == 1 and y.carrier == circle_of(g, "C")
    assert y.is_cyclic(f)


def test_component_cyclic_doubled(systems):
    f = systems["doubled"].map
    g = f.g
    e = ArcSet.from_points(g, [Vertex("e")])
    y = build_component_cyclic(f, EdgePoint("A0", F(1, 3)), e, EPS)
    assert y.k == 2
    assert y.components == [circle_of(g, "A"), circle_of(g, "B")]
    assert y.is_cyclic(f)


def test_seed_inside_avoid(systems):
    f = systems["lollipop"].map
    e = ArcSet.from_points(f.g, [Vertex("e")])
    with pytest.raises(SeedInsideAvoid):
        build_component_cyclic(f, Vertex("e"), e, EPS)


def test_union_if_meeting(systems):
    f = systems["lollipop"].map
    g = f.g
    e = ArcSet.from_points(g, [Vertex("e")])
    a = build_component_cyclic(f, EdgePoint("C0", F(1, 5)), e, EPS)
    b = build_component_cyclic(f, EdgePoint("C2", F(3, 5)), e, EPS)
    assert union_if_meeting(f, a, a).carrier == a.carrier
    merged = union_if_meeting(f, a, b)
    assert merged.k == 1 and merged.carrier == circle_of(g, "C")
    stub = ComponentCyclicSet([ArcSet.from_points(g, [Vertex("e")])])
    assert union_if_meeting(f, a, stub) is Disjoint


def test_core_of_circle_and_identity(systems):
    f = systems["lollipop"].map
    g = f.g
    y = ComponentCyclicSet([circle_of(g, "C")])
    assert strongly_invariant_core(f, y) == [circle_of(g, "C")]
    ident = systems["identity"].map
    arc = ArcSet(ident.g, {"ab": [(0, 1)], "bc": [(0, F(1, 2))]})
    assert strongly_invariant_core(ident, ComponentCyclicSet([arc])) == [arc]


def test_core_sheds_whisker(systems):
    f = systems["whisker"].map
    g = f.g
    y = ComponentCyclicSet([circle_of(g, "C") | ArcSet.interval(g, "P", F(1, 2), 1)])
    assert image(f, y.components[0]) <= y.components[0]
    assert strongly_invariant_core(f, y) == [circle_of(g, "C")]


def test_lollipop_report(systems, reports):
    f = systems["lollipop"].map
    g = f.g
    rep = reports["lollipop"]
    assert rep.n == 1
    c = rep.classes[0]
    circle = circle_of(g, "C")
    assert c.k == 1 and c.cores == [circle] and c.circles == [circle]
    assert c.cover == circle
    assert rep.ok
    assert max(c.entry_times.values()) <= 50
    for x, n in c.entry_times.items():
        y = x
        for _ in range(n):
            y = f(y)
        assert y in circle


def test_doubled_report(systems, reports):
    g = systems["doubled"].graph
    rep = reports["doubled"]
    assert rep.n == 1 and rep.classes[0].k == 2
    assert rep.classes[0].cores == [circle_of(g, "A"), circle_of(g, "B")]
    assert rep.verdict("clause3").ok and rep.verdict("clause5").ok


@pytest.mark.parametrize("name", ["tent", "rotation3", "identity", "flip", "escape", "two_sided"])
def test_no_candidates(reports, name):
    rep = reports[name]
    assert rep.n == 0 and rep.sample == [] and rep.regime
    assert rep.ok


def test_tent_regime(reports):
    assert reports["tent"].regime.startswith("tree regime")


def test_report_classes_are_bounded_by_disjoint_circles(systems, reports):
    for name in systems:
        assert reports[name].n <= max_disjoint_circles(systems[name].graph)


def test_shuffled_seeds_give_the_same_carriers(systems, reports):
    f = systems["lollipop"].map
    rep = reports["lollipop"]
    expected = {c.cyclic.carrier for c in rep.classes}
    for seed in (1, 2, 3):
        assert shuffle_invariant(f, rep, seed) == expected


def test_decompose_is_deterministic(systems, reports):
    from graphdyn.decomposition import decompose
    from graphdyn.report import decomposition_data, structured

    s = systems["circle"]
    again = decompose(s.map, Params.from_mapping(s.params), "circle")
    assert structured(decomposition_data(again)) == structured(decomposition_data(reports["circle"]))


def test_cores_and_circles(systems, reports):
    for name in ("lollipop", "doubled", "whisker", "circle"):
        f = systems[name].map
        for c in reports[name].classes:
            k = c.k
            assert image(power(f, k), c.cores[0]) == c.cores[0]
            for j in range(k):
                assert image(f, c.cores[j]) == c.cores[(j + 1) % k]
                assert find_circles(c.cores[j])


# semi-conjugacy ----------------------------------------------------------------

@pytest.fixture(scope="module")
def semi(systems, reports):
    return build_semiconjugacy(systems["lollipop"].map, reports["lollipop"], 1)


def test_semiconjugacy_identity(systems, semi):
    f = systems["lollipop"].map
    assert semi.rho == GOLDEN
    assert len(semi.table) >= 100
    for x in list(semi.table):
        conj, same = semi.check_point(x)
        assert conj and same


def test_psi_at_attachment_point(semi):
    p = Vertex("c0")
    assert semi.entry_time(p) == 0
    assert semi.psi(p) == semi.chart(p)


def test_psi_one_step_before_entry(systems, semi):
    f = systems["lollipop"].map
    x = f.g.point("P", F(2, 3))
    assert f(x) == Vertex("c0") and semi.entry_time(x) == 1
    assert semi.psi(x) == (semi.chart(Vertex("c0")) - GOLDEN) % 1


def test_psi_near_fixed_end(systems, semi):
    x = systems["lollipop"].graph.point("P", F(1, 10 ** 50))  # needs ~284 steps
    with pytest.raises(EntryHorizonExceeded):
        semi.psi(x)


def test_semiconjugacy_requires_circle_core(systems, reports):
    rep = reports["lollipop"]
    c = rep.classes[0]
    f = systems["lollipop"].map
    saved = c.cores
    c.cores = [saved[0] | ArcSet.full_edges(f.g, ["P"])]
    try:
        with pytest.raises(UnsupportedCore):
            build_semiconjugacy(f, rep, 1)
    finally:
        c.cores = saved


# corollaries ----------------------------------------------------------------

def test_corollaries_lollipop(systems, reports):
    vs = {v.name: v for v in verify_corollaries(systems["lollipop"].map, reports["lollipop"])}
    assert all(v.ok for v in vs.values())
    assert "n=1 <= max disjoint circles 1" in vs["4.1"].detail
    assert "d(W, P_N) = 1," in vs["4.7"].detail


def test_corollaries_tent(systems, reports):
    vs = {v.name: v for v in verify_corollaries(systems["tent"].map, reports["tent"])}
    assert all(v.ok for v in vs.values())
    assert "tree regime" in vs["4.9/4.10"].detail


def test_corollaries_rotation(systems, reports):
    vs = {v.name: v for v in verify_corollaries(systems["rotation3"].map, reports["rotation3"])}
    assert vs["4.8"].ok and all(v.ok for v in vs.values())


def test_w_cover_far_from_periodic_set(systems, reports):
    rep = reports["lollipop"]
    cover = rep.classes[0].cover
    assert not cover.meets(neighborhood(rep.P, EPS))

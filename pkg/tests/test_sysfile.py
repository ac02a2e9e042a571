from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdyn import fixtures
from graphdyn.errors import DiscontinuousAtVertex, SemanticError, SystemSyntaxError
from graphdyn.sysfile import parse_system, print_system

TENT = """\
vertex v0
vertex v1
edge I v0 v1 1
piece I 0 1/2 -> I+:0:1
piece I 1/2 1 -> I-:1:0
"""


@pytest.mark.parametrize("name", sorted(fixtures.BUILDERS))
def test_bundled_files_match_builders(systems, name):
    shipped = fixtures.load(name)
    assert shipped.structure() == systems[name].structure()
    assert shipped.map == systems[name].map


@pytest.mark.parametrize("name", sorted(fixtures.BUILDERS))
def test_round_trip(systems, name):
    s = systems[name]
    again = parse_system(print_system(s), name=s.name)
    assert again.structure() == s.structure()
    assert print_system(again) == print_system(s)


def test_parse_tent():
    s = parse_system(TENT)
    assert s.map.piece_count() == 2


def test_undeclared_vertex():
    with pytest.raises(SemanticError):
        parse_system("vertex a\nedge e1 a b 1/1\n")


def test_malformed_rational_has_position():
    with pytest.raises(SystemSyntaxError) as info:
        parse_system("vertex a\nvertex b\nedge e1 a b 1//2\n")
    assert info.value.line == 3
    assert "line 3" in str(info.value)


def test_unknown_edge_in_piece():
    with pytest.raises(SemanticError):
        parse_system(TENT + "piece J 0 1 -> I+:0:1\n")


def test_noncontiguous_path():
    text = TENT.replace("I+:0:1", "I+:0:1/2, I+:3/4:1")
    with pytest.raises(SemanticError):
        parse_system(text)


def test_unknown_param():
    with pytest.raises(SemanticError):
        parse_system(TENT + "param colour 3\n")


def test_params_are_typed():
    s = parse_system(TENT + "param eps 1/50\nparam horizon 100\n")
    assert s.params == {"eps": F(1, 50), "horizon": 100}


def test_comments_and_blank_lines():
    s = parse_system("# tent\n\n" + TENT.replace("edge I", "edge I  ") + "  # done\n")
    assert s.map.piece_count() == 2


def test_discontinuous_fixture():
    with pytest.raises(DiscontinuousAtVertex):
        fixtures.load("discontinuous").map


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=97), min_size=2, max_size=5))
def test_round_trip_random_interval_maps(vals):
    n = len(vals) - 1
    lines = ["vertex v0", "vertex v1", "edge I v0 v1 3/2"]
    for i in range(n):
        lo, hi = F(i, n), F(i + 1, n)
        a, b = vals[i], vals[i + 1]
        sign = "+" if b >= a else "-"
        lines.append(f"piece I {lo} {hi} -> I{sign}:{a}:{b}")
    s = parse_system("\n".join(lines) + "\n")
    again = parse_system(print_system(s))
    assert again.structure() == s.structure()
    assert again.map == s.map

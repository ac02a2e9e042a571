"""Bundled example systems.

Each builder returns a ``System`` whose map is described on the raw graph,
so ``print_system`` reproduces the shipped ``data/*.sys`` files.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .graph import Graph, validate_graph
from .plmap import RawPiece, Step
from .sysfile import System, parse_system

F = Fraction
GOLDEN = F(6765, 10946)


def circle_path(edges, lengths, start, length):
    """Steps running ``length`` forward along a circle from arclength ``start``.

    ``edges`` are traversed u -> v in order; positions are measured from the
    ``u`` end of the first edge.
    """
    total = sum(lengths, F(0))
    pos = start % total
    steps = []
    remaining = F(length)
    # locate the edge containing pos (prefer the edge that starts at pos)
    i, acc = 0, F(0)
    while pos >= acc + lengths[i]:
        acc += lengths[i]
        i = (i + 1) % len(edges)
        if i == 0:
            acc = F(0)
    while remaining > 0:
        L = lengths[i]
        ta = (pos - acc) / L
        room = L - (pos - acc)
        run = min(room, remaining)
        tb = ta + run / L
        steps.append(Step(edges[i], ta, tb, 1))
        remaining -= run
        pos += run
        if pos - acc == L:
            acc += L
            i = (i + 1) % len(edges)
            if i == 0:
                pos, acc = F(0), F(0)
    if not steps:
        L = lengths[i]
        steps.append(Step(edges[i], (pos - acc) / L, (pos - acc) / L, 1))
    return steps


def _rotation_pieces(edges, lengths, shift, target=None, tlengths=None):
    """Pieces mapping each circle edge forward by ``shift`` onto ``target``."""
    target = target or edges
    tlengths = tlengths or lengths
    out, acc = [], F(0)
    for e, L in zip(edges, lengths):
        out.append(RawPiece(e, 0, 1, circle_path(target, tlengths, acc + shift, L)))
        acc += L
    return out


def _system(vertices, edges, pieces, name, **params):
    g = validate_graph(Graph(vertices, edges))
    return System(g, pieces, dict(params), name)


def tent():
    """x -> 2x on [0, 1/2], x -> 2 - 2x on [1/2, 1]."""
    return _system(["v0", "v1"], [("I", "v0", "v1", 1)], [
        RawPiece("I", 0, F(1, 2), [Step("I", 0, 1)]),
        RawPiece("I", F(1, 2), 1, [Step("I", 1, 0)]),
    ], "tent")


def triangle_rotation():
    """Each side of a unit triangle onto the next one."""
    edges = [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1)]
    return _system(["a", "b", "c"], edges, [
        RawPiece("ab", 0, 1, [Step("bc", 0, 1)]),
        RawPiece("bc", 0, 1, [Step("ca", 0, 1)]),
        RawPiece("ca", 0, 1, [Step("ab", 0, 1)]),
    ], "rotation by 1/3")


def triangle_identity():
    edges = [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1)]
    return _system(["a", "b", "c"], edges,
                   [RawPiece(e, 0, 1, [Step(e, 0, 1)]) for e, *_ in edges], "identity")


def circle_rotation(alpha=GOLDEN, circumference=1):
    """Rotation by ``alpha`` turns on a triangle of the given circumference."""
    L = F(circumference) / 3
    names = ["C0", "C1", "C2"]
    edges = [("C0", "c0", "c1", L), ("C1", "c1", "c2", L), ("C2", "c2", "c0", L)]
    pieces = _rotation_pieces(names, [L] * 3, alpha * F(circumference))
    return _system(["c0", "c1", "c2"], edges, pieces, f"rotation by {alpha}")


def lollipop(alpha=GOLDEN):
    """Circle of circumference 3 rotated by ``alpha`` turns, with a pendant.

    The pendant P runs from the fixed end ``e`` (t=0) to ``c0`` (t=1).  Its
    first two thirds stretch onto P with slope 3/2, the last third wraps onto
    the circle from ``c0`` to the image of ``c0``.
    """
    names = ["C0", "C1", "C2"]
    ones = [F(1)] * 3
    shift = 3 * alpha
    pieces = _rotation_pieces(names, ones, shift)
    pieces += [
        RawPiece("P", 0, F(2, 3), [Step("P", 0, 1)]),
        RawPiece("P", F(2, 3), 1, circle_path(names, ones, 0, shift)),
    ]
    edges = [("C0", "c0", "c1", 1), ("C1", "c1", "c2", 1), ("C2", "c2", "c0", 1),
             ("P", "e", "c0", 1)]
    return _system(["c0", "c1", "c2", "e"], edges, pieces, "lollipop",
                   eps=F(1, 100), horizon=2000, grid=64, period_cap=5, depth=40)


def doubled_lollipop(alpha=GOLDEN):
    """Two circles swapped by the map, joined to a common fixed point ``e``.

    C_a is carried onto C_b with a turn of ``alpha``, C_b back onto C_a
    isometrically; the pendants Pa and Pb are exchanged likewise, Pa
    stretching over Pb and wrapping onto C_b.
    """
    an, bn = ["A0", "A1", "A2"], ["B0", "B1", "B2"]
    ones = [F(1)] * 3
    shift = 3 * alpha
    pieces = _rotation_pieces(an, ones, shift, target=bn)
    pieces += _rotation_pieces(bn, ones, 0, target=an)
    pieces += [
        RawPiece("Pa", 0, F(2, 3), [Step("Pb", 0, 1)]),
        RawPiece("Pa", F(2, 3), 1, circle_path(bn, ones, 0, shift)),
        RawPiece("Pb", 0, 1, [Step("Pa", 0, 1)]),
    ]
    edges = [("A0", "a0", "a1", 1), ("A1", "a1", "a2", 1), ("A2", "a2", "a0", 1),
             ("B0", "b0", "b1", 1), ("B1", "b1", "b2", 1), ("B2", "b2", "b0", 1),
             ("Pa", "e", "a0", 1), ("Pb", "e", "b0", 1)]
    return _system(["a0", "a1", "a2", "b0", "b1", "b2", "e"], edges, pieces,
                   "doubled lollipop", eps=F(1, 100), horizon=2000, grid=32,
                   period_cap=4, depth=30)


def whisker(alpha=GOLDEN):
    """Lollipop variant whose pendant end [1/2, 1] is swallowed after two steps."""
    names = ["C0", "C1", "C2"]
    ones = [F(1)] * 3
    shift = 3 * alpha
    pieces = _rotation_pieces(names, ones, shift)
    pieces += [
        RawPiece("P", 0, F(1, 2), [Step("P", 0, F(3, 4))]),
        RawPiece("P", F(1, 2), 1, [Step("P", F(3, 4), 1)] + circle_path(names, ones, 0, shift)),
    ]
    edges = [("C0", "c0", "c1", 1), ("C1", "c1", "c2", 1), ("C2", "c2", "c0", 1),
             ("P", "e", "c0", 1)]
    return _system(["c0", "c1", "c2", "e"], edges, pieces, "whisker")


def escape_map():
    """3x/2 on [0, 1/2], (x + 1)/2 on [1/2, 1]: every x in (0, 1) drifts up to 1."""
    return _system(["v0", "v1"], [("I", "v0", "v1", 1)], [
        RawPiece("I", 0, F(1, 2), [Step("I", 0, F(3, 4))]),
        RawPiece("I", F(1, 2), 1, [Step("I", F(3, 4), 1)]),
    ], "escape map")


def two_sided_escape():
    """Repelling fixed point 1/2; orbits of [3/8, 5/8] escape to 0 and to 1."""
    return _system(["v0", "v1"], [("I", "v0", "v1", 1)], [
        RawPiece("I", 0, F(1, 4), [Step("I", 0, F(1, 8))]),
        RawPiece("I", F(1, 4), F(3, 4), [Step("I", F(1, 8), F(7, 8))]),
        RawPiece("I", F(3, 4), 1, [Step("I", F(7, 8), 1)]),
    ], "two-sided escape")


def flip():
    """x -> 1 - x."""
    return _system(["v0", "v1"], [("I", "v0", "v1", 1)], [
        RawPiece("I", 0, 1, [Step("I", 1, 0)]),
    ], "flip")


BUILDERS = {
    "tent": tent,
    "rotation3": triangle_rotation,
    "identity": triangle_identity,
    "circle": circle_rotation,
    "lollipop": lollipop,
    "doubled": doubled_lollipop,
    "whisker": whisker,
    "escape": escape_map,
    "two_sided": two_sided_escape,
    "flip": flip,
}


def load(name: str) -> System:
    """Parse a bundled ``data/<name>.sys`` file."""
    text = resources.files("graphdyn").joinpath("data", f"{name}.sys").read_text()
    return parse_system(text, name=name)

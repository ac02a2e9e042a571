"""Line-oriented system description files.

    # comment
    vertex <id>
    edge <id> <u> <v> <length>
    piece <edge> <t0> <t1> -> <edge><+|->:<ta>:<tb> [, ...]
    param <name> <value>

Numbers are integers or ``p/q`` rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MapError, PathNotContiguous, SemanticError, SystemSyntaxError
from .graph import Graph, validate_graph
from .plmap import PLMap, RawPiece, Step, validate_map

IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_ident = re.compile(IDENT + r"\Z")
_rational = re.compile(r"-?\d+(/\d+)?\Z")
_step = re.compile(rf"({IDENT})([+-]):([^:,\s]+):([^:,\s]+)\Z")

PARAMS = {
    "eps": Fraction,
    "horizon": int,
    "grid": int,
    "period_cap": int,
    "depth": int,
    "piece_cap": int,
    "seed": int,
    "stabilize_cap": int,
    "ep_depth": int,
    "samples": int,
}


@dataclass
class System:
    graph: Graph
    pieces: list
    params: dict = field(default_factory=dict)
    name: str = ""
    _map: PLMap | None = None

    @property
    def raw_graph(self) -> Graph:
        return self.graph.raw

    @property
    def map(self) -> PLMap:
        if self._map is None:
            self._map = validate_map(self.graph, self.pieces)
        return self._map

    def structure(self):
        """Comparable structural summary (used for round-trip checks)."""
        raw = self.raw_graph
        return (raw.vertices, tuple(raw.edges.values()),
                tuple(sorted(((p.edge, p.t0, p.t1, p.path) for p in self.pieces),
                             key=lambda x: (raw.edge_order[x[0]], x[1]))),
                tuple(sorted(self.params.items())))


def _rat(tok, line, col):
    if not _rational.match(tok):
        raise SystemSyntaxError(f"malformed rational {tok!r}", line, col)
    q = Fraction(tok)
    return q


def _tokens(text):
    """Yield (token, column) pairs; columns are 1-based."""
    for m in re.finditer(r"->|,|[^\s,]+", text):
        yield m.group(0), m.start() + 1


def parse_system(text: str, name: str = "", validate: bool = True) -> System:
    vertices, edges, pieces, params = [], [], [], {}
    piece_lines = []
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        kw, kcol = toks[0]
        if kw == "vertex":
            if len(toks) != 2:
                raise SystemSyntaxError("expected: vertex <id>", lineno, kcol)
            vid, col = toks[1]
            if not _ident.match(vid):
                raise SystemSyntaxError(f"bad identifier {vid!r}", lineno, col)
            vertices.append(vid)
        elif kw == "edge":
            if len(toks) != 5:
                raise SystemSyntaxError("expected: edge <id> <u> <v> <length>", lineno, kcol)
            for tok, col in toks[1:4]:
                if not _ident.match(tok):
                    raise SystemSyntaxError(f"bad identifier {tok!r}", lineno, col)
            length = _rat(toks[4][0], lineno, toks[4][1])
            edges.append((toks[1][0], toks[2][0], toks[3][0], length, lineno))
        elif kw == "piece":
            if len(toks) < 6 or toks[4][0] != "->":
                raise SystemSyntaxError("expected: piece <edge> <t0> <t1> -> <steps>", lineno, kcol)
            eid, ecol = toks[1]
            if not _ident.match(eid):
                raise SystemSyntaxError(f"bad identifier {eid!r}", lineno, ecol)
            t0 = _rat(toks[2][0], lineno, toks[2][1])
            t1 = _rat(toks[3][0], lineno, toks[3][1])
            steps = []
            rest = toks[5:]
            expect_step = True
            for tok, col in rest:
                if expect_step:
                    m = _step.match(tok)
                    if not m:
                        raise SystemSyntaxError(f"malformed path step {tok!r}", lineno, col)
                    ta = _rat(m.group(3), lineno, col)
                    tb = _rat(m.group(4), lineno, col)
                    sign = 1 if m.group(2) == "+" else -1
                    steps.append((m.group(1), sign, ta, tb, col))
                elif tok != ",":
                    raise SystemSyntaxError(f"expected ',' before {tok!r}", lineno, col)
                expect_step = not expect_step
            if expect_step:
                raise SystemSyntaxError("trailing ',' in path", lineno, rest[-1][1])
            piece_lines.append((eid, t0, t1, steps, lineno))
        elif kw == "param":
            if len(toks) != 3:
                raise SystemSyntaxError("expected: param <name> <value>", lineno, kcol)
            pname, pcol = toks[1]
            if pname not in PARAMS:
                raise SemanticError(f"line {lineno}: unknown parameter {pname!r}")
            val = _rat(toks[2][0], lineno, toks[2][1])
            conv = PARAMS[pname]
            if conv is int:
                if val.denominator != 1:
                    raise SemanticError(f"line {lineno}: parameter {pname!r} must be an integer")
                val = int(val)
            params[pname] = val
        else:
            raise SystemSyntaxError(f"unknown keyword {kw!r}", lineno, kcol)

    vset = set(vertices)
    if len(vset) != len(vertices):
        raise SemanticError("duplicate vertex id")
    eids = set()
    for eid, u, v, length, lineno in edges:
        for x in (u, v):
            if x not in vset:
                raise SemanticError(f"line {lineno}: edge {eid!r} uses undeclared vertex {x!r}")
        if eid in eids:
            raise SemanticError(f"line {lineno}: duplicate edge id {eid!r}")
        eids.add(eid)
    for eid, t0, t1, steps, lineno in piece_lines:
        if eid not in eids:
            raise SemanticError(f"line {lineno}: piece on undeclared edge {eid!r}")
        for sid, sign, ta, tb, col in steps:
            if sid not in eids:
                raise SemanticError(f"line {lineno}: path uses undeclared edge {sid!r}")
            for t in (t0, t1, ta, tb):
                if not 0 <= t <= 1:
                    raise SemanticError(f"line {lineno}: coordinate {t} outside [0, 1]")
        pieces.append(RawPiece(eid, t0, t1, [Step(s, ta, tb, sign) for s, sign, ta, tb, _ in steps]))
    g = validate_graph(Graph(vertices, [e[:4] for e in edges]))
    system = System(g, pieces, params, name)
    if validate:
        try:
            system.map
        except PathNotContiguous as exc:
            raise SemanticError(str(exc)) from exc
        except MapError as exc:
            if type(exc) is MapError:
                raise SemanticError(str(exc)) from exc
            raise
    return system


def _fmt(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_system(system: System) -> str:
    raw = system.raw_graph
    lines = []
    if system.name:
        lines.append(f"# {system.name}")
    for v in raw.vertices:
        lines.append(f"vertex {v}")
    for e in raw.edges.values():
        lines.append(f"edge {e.id} {e.u} {e.v} {_fmt(e.length)}")
    order = sorted(system.pieces, key=lambda p: (raw.edge_order[p.edge], p.t0))
    for p in order:
        path = ", ".join(f"{s.edge}{'+' if s.sign > 0 else '-'}:{_fmt(s.ta)}:{_fmt(s.tb)}"
                         for s in p.path)
        lines.append(f"piece {p.edge} {_fmt(p.t0)} {_fmt(p.t1)} -> {path}")
    for k in sorted(system.params):
        lines.append(f"param {k} {_fmt(system.params[k])}")
    return "\n".join(lines) + "\n"

"""Text, structured text, DOT and CSV renderings.

Everything here is deterministic: no timings, no hashes of objects, and
all rationals are printed exactly as ``p/q``.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction

from .graph import EdgePoint, Vertex
from .sets import ArcSet, OpenArcSet


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Vertex):
        return x.id
    if isinstance(x, EdgePoint):
        return f"{x.edge}:{fmt(x.t)}"
    if isinstance(x, (ArcSet, OpenArcSet)):
        return x.describe()
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def structured(data, indent=0) -> str:
    """``key: value`` lines, nested mappings indented by two spaces.

    Lists of scalars are written inline; lists of mappings become
    numbered sub-blocks.
    """
    pad = "  " * indent
    lines = []
    for key, val in data.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(structured(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(val, 1):
                lines.append(f"{pad}  - {i}:")
                lines.append(structured(item, indent + 2))
        elif isinstance(val, (list, tuple)):
            lines.append(f"{pad}{key}: [{', '.join(fmt(v) for v in val)}]")
        else:
            lines.append(f"{pad}{key}: {fmt(val)}")
    return "\n".join(line for line in lines if line)


def text_block(title, data) -> str:
    out = [title, "=" * len(title)]
    for key, val in data.items():
        if isinstance(val, dict):
            out.append(f"{key}:")
            out.extend(f"  {k}: {fmt(v) if not isinstance(v, (list, tuple)) else ', '.join(map(fmt, v))}"
                       for k, v in val.items())
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            out.append(f"{key}:")
            for i, item in enumerate(val, 1):
                out.append(f"  [{i}]")
                for k, v in item.items():
                    shown = ", ".join(map(fmt, v)) if isinstance(v, (list, tuple)) else fmt(v)
                    out.append(f"      {k}: {shown}")
        elif isinstance(val, (list, tuple)):
            out.append(f"{key}: {', '.join(map(fmt, val)) if val else '(none)'}")
        else:
            out.append(f"{key}: {fmt(val)}")
    return "\n".join(out)


def verdict_lines(verdicts):
    return [str(v) for v in verdicts]


def summary(s: ArcSet, limit=40) -> str:
    """Full description for small sets, counts for large ones."""
    pts = s.points()
    if len(pts) <= limit:
        return s.describe()
    fat = ArcSet(s.g, {e: [iv for iv in ivs if iv[0] < iv[1]] for e, ivs in s.edges.items()})
    arcs = fat.describe() if fat else "no arcs"
    return f"{len(pts)} isolated points; {arcs}"


def decomposition_data(report) -> dict:
    data = {
        "system": report.system or "(unnamed)",
        "params": {k: v for k, v in report.params.items()},
        "periodic": {
            "solved_to": report.period_reached,
            "P": summary(report.P),
            "EP_approximant": summary(report.EP),
        },
        "candidates": len(report.sample),
        "classes": report.n,
    }
    if report.regime:
        data["regime"] = report.regime
    data["class"] = [{
        "index": c.index,
        "k": c.k,
        "cores": [c_ for c_ in c.cores],
        "circles": c.circles,
        "covers": c.covers,
        "absorbed": c.components,
        "absorbed_stabilized": c.stabilized,
        "max_entry_time": max(c.entry_times.values(), default=0),
    } for c in report.classes]
    if not data["class"]:
        del data["class"]
    if report.U0 is not None:
        data["U0"] = report.U0
    data["verdicts"] = {v.name: f"{'pass' if v.ok else 'FAIL'} [{v.kind}] {v.detail}".rstrip()
                        for v in report.verdicts}
    if report.notes:
        data["notes"] = report.notes
    return data


def dot(g, report=None) -> str:
    """Graphviz DOT of the raw graph; core and circle edges annotated per class."""
    raw = g.raw
    marks = {}
    if report is not None:
        for c in report.classes:
            for core, circ in zip(c.cores, c.circles):
                for e in core.edges:
                    re_ = g.origin[e][0]
                    tag = "circle" if e in circ.edges else "core"
                    old = marks.get(re_)
                    if old is None or old[1] == "core":
                        marks[re_] = (c.index, tag)
    lines = ["graph G {"]
    br = {v.id for v in raw.branching_points()}
    for v in raw.vertices:
        shape = "box" if v in br else "circle"
        lines.append(f'  "{v}" [shape={shape}];')
    for e in raw.edge_order:
        edge = raw.edges[e]
        label = f"{e} ({fmt(edge.length)})"
        attrs = [f'label="{label}"']
        if e in marks:
            i, tag = marks[e]
            label += f" class {i} {tag}"
            attrs = [f'label="{label}"', "penwidth=3" if tag == "circle" else "style=dashed"]
        lines.append(f'  "{edge.u}" -- "{edge.v}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def orbit_csv(g, orbit) -> str:
    """CSV trace ``step, point, edge, t, float_t`` (float column for plotting only)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "point", "edge", "t", "t_float"])
    for i, x in enumerate(orbit):
        e, t = g.coords(x)
        w.writerow([i, fmt(x), e, fmt(t), f"{float(t):.12g}"])
    return buf.getvalue()

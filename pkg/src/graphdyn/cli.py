"""Command line front end.

    graphdyn analyze   SYSTEM
    graphdyn orbit     SYSTEM (--point X | --set E:a:b) [--steps N]
    graphdyn periodic  SYSTEM [--ep N]
    graphdyn decompose SYSTEM
    graphdyn verify    SYSTEM
    graphdyn plot-data SYSTEM --out DIR

SYSTEM is a path to a ``.sys`` file or the name of a bundled fixture.
Exit status: 0 all verdicts pass, 2 some verdict fails, 1 error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import fixtures
from .decomposition import Params, decompose, verify_corollaries
from .errors import GraphDynError, NoCandidates
from .graph import Vertex
from .orbits import orbit_stabilize
from .periodic import ep_n, periodic_points
from .plmap import PowerCache, image
from .recurrence import orbit_points
from .report import decomposition_data, dot, fmt, orbit_csv, structured, text_block
from .sets import ArcSet
from .sysfile import parse_system
from .topology import max_disjoint_circles, xi

OK, FAIL, ERROR = 0, 2, 1


def load_system(source: str):
    path = Path(source)
    if path.is_file():
        return parse_system(path.read_text(encoding="utf-8"), name=path.stem)
    try:
        return fixtures.load(source)
    except FileNotFoundError:
        raise GraphDynError(f"no such system file or bundled fixture: {source}") from None


def params_for(system, args) -> Params:
    merged = dict(system.params)
    for key in ("eps", "horizon", "grid", "period_cap", "depth", "piece_cap", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return Params.from_mapping(merged)


def parse_point(g, text):
    """``vertex`` or ``edge:t`` in raw-graph coordinates."""
    if ":" not in text:
        if text not in g.vertices:
            raise GraphDynError(f"unknown vertex {text!r}")
        return Vertex(text)
    e, t = text.split(":", 1)
    try:
        return g.from_raw(e, Fraction(t))
    except (KeyError, ValueError):
        raise GraphDynError(f"bad point {text!r}") from None


def parse_interval(g, text):
    try:
        e, a, b = text.split(":")
        a, b = Fraction(a), Fraction(b)
    except ValueError:
        raise GraphDynError(f"bad interval {text!r}, expected EDGE:a:b") from None
    x, y = g.from_raw(e, a), g.from_raw(e, b)
    # a raw interval may cross synthetic subdivision vertices
    out = ArcSet.from_points(g, [x, y])
    for sub, (raw_e, c0, c1) in g.origin.items():
        if raw_e != e or c1 <= a or c0 >= b:
            continue
        lo, hi = (max(a, c0) - c0) / (c1 - c0), (min(b, c1) - c0) / (c1 - c0)
        out = out.union(ArcSet.interval(g, sub, lo, hi))
    return out


class Output:
    """Collects the human-readable and the structured rendering side by side."""

    def __init__(self, out_dir):
        self.out_dir = Path(out_dir) if out_dir else None
        self.text, self.kv = [], []

    def add(self, title, data):
        self.text.append(text_block(title, data))
        self.kv.append(structured({title.lower().replace(" ", "_"): data}))

    def file(self, name, content):
        if self.out_dir is None:
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / name).write_text(content, encoding="utf-8")

    def flush(self, stem):
        text = "\n\n".join(self.text) + "\n"
        kv = "\n".join(self.kv) + "\n"
        if self.out_dir is None:
            sys.stdout.write(text + "\n" + kv)
        else:
            self.file(f"{stem}.txt", text)
            self.file(f"{stem}.kv", kv)
            sys.stdout.write(text)


def cmd_analyze(system, args, out):
    g = system.graph
    raw = system.raw_graph
    f = system.map
    out.add("Analysis", {
        "system": system.name or "(unnamed)",
        "vertices": list(raw.vertices),
        "edges": len(raw.edges),
        "total_length": g.diameter,
        "xi": xi(raw),
        "branching_points": raw.branching_points(),
        "endpoints": raw.endpoints(),
        "max_disjoint_circles": max_disjoint_circles(raw),
        "subdivided_edges": len(g.edges),
        "pieces": f.piece_count(),
    })
    return OK


def cmd_orbit(system, args, out):
    f = system.map
    g = f.g
    if args.point:
        x = parse_point(g, args.point)
        orbit = orbit_points(f, x, 0, args.steps)
        out.add("Orbit", {"start": x, "steps": args.steps, "points": orbit})
        out.file("orbit.csv", orbit_csv(g, orbit))
        return OK
    k = parse_interval(g, args.set)
    trace = {"K": k}
    cur = k
    for i in range(1, args.steps + 1):
        cur = image(f, cur)
        trace[f"f^{i}(K)"] = cur
        if i >= 50 and i < args.steps:
            trace["truncated"] = f"trace shown to {i} of {args.steps} steps"
            break
    try:
        res = orbit_stabilize(f, k, args.steps)
        trace["stabilized"] = res.stabilized
        trace["orbit"] = res.X
        if res.stabilized:
            trace["n"] = res.n
    except GraphDynError as exc:
        trace["stabilized"] = f"n/a ({exc})"
    out.add("Orbit of set", trace)
    return OK


def cmd_periodic(system, args, out):
    f = system.map
    p = params_for(system, args)
    powers = PowerCache(f, p.piece_cap)
    pp = periodic_points(f, p.period_cap, p.piece_cap, powers)
    data = {
        "N": p.period_cap,
        "solved_to": pp.reached,
        "complete": pp.complete,
        "count": len(pp.points),
        "continua": pp.solutions.continua,
    }
    if pp.error:
        data["error"] = pp.error
    for d, pts in sorted(pp.by_period().items()):
        data[f"period {d}"] = pts
    for comp, n in pp.continua_periods:
        data[f"continuum {fmt(comp)}"] = f"pointwise fixed by f^{n}"
    out.add("Periodic points", data)
    if args.ep:
        sol = ep_n(f, args.ep, p.piece_cap, powers)
        out.add(f"EP_{args.ep}", {"points": sol.points, "continua": sol.continua})
    return OK if pp.complete else FAIL


def _decompose(system, args):
    p = params_for(system, args)
    f = system.map
    try:
        return f, decompose(f, p, system.name)
    except NoCandidates as exc:
        return f, exc.report


def cmd_decompose(system, args, out):
    f, rep = _decompose(system, args)
    out.add("Decomposition", decomposition_data(rep))
    return OK if rep.ok else FAIL


def cmd_verify(system, args, out):
    f, rep = _decompose(system, args)
    verdicts = list(rep.verdicts) + verify_corollaries(f, rep)
    data = {"system": system.name or "(unnamed)", "classes": rep.n}
    if rep.regime:
        data["regime"] = rep.regime
    data["verdicts"] = {v.name: f"{'pass' if v.ok else 'FAIL'} [{v.kind}] {v.detail}".rstrip()
                        for v in verdicts}
    out.add("Verification", data)
    return OK if all(v.ok for v in verdicts) else FAIL


def cmd_plot_data(system, args, out):
    f, rep = _decompose(system, args)
    g = f.g
    out.file("graph.dot", dot(g, rep))
    files = ["graph.dot"]
    seeds = [c.cyclic.seed for c in rep.classes] or ArcSet.whole(g).grid(4)[:1]
    for i, x in enumerate(seeds, 1):
        out.file(f"orbit_{i}.csv", orbit_csv(g, orbit_points(f, x, 0, args.steps)))
        files.append(f"orbit_{i}.csv")
    if out.out_dir is None:
        sys.stdout.write(dot(g, rep))
    out.add("Plot data", {"files": files if out.out_dir else ["(stdout)"], "classes": rep.n})
    return OK if rep.ok else FAIL


COMMANDS = {
    "analyze": cmd_analyze,
    "orbit": cmd_orbit,
    "periodic": cmd_periodic,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "plot-data": cmd_plot_data,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="graphdyn",
                                     description="Exact dynamics of piecewise linear graph maps.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="path to a .sys file or a bundled fixture name")
    common.add_argument("--eps", type=Fraction)
    common.add_argument("--horizon", type=int)
    common.add_argument("--grid", type=int)
    common.add_argument("--period-cap", dest="period_cap", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--piece-cap", dest="piece_cap", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="directory for report and plot files")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "orbit":
            grp = sp.add_mutually_exclusive_group(required=True)
            grp.add_argument("--point", help="vertex id or EDGE:t")
            grp.add_argument("--set", help="interval EDGE:a:b")
        if name in ("orbit", "plot-data"):
            sp.add_argument("--steps", type=int, default=100)
        if name == "periodic":
            sp.add_argument("--ep", type=int, default=0, help="also list EP_n")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = Output(args.out)
    try:
        system = load_system(args.system)
        system.map
        status = COMMANDS[args.command](system, args, out)
    except GraphDynError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return ERROR
    out.flush(args.command.replace("-", "_"))
    return status


if __name__ == "__main__":
    sys.exit(main())

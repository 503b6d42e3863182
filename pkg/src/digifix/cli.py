"""Command-line front end.

Exit codes: 0 verified / PASS, 1 refuted / FAIL, 2 unknown (budget),
3 usage error, 4 input error (unreadable or malformed image or map).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from . import geometry as geo
from . import predict
from .core import ImageError
from .formats import read_image
from .maps import SelfMap, format_map, parse_map
from .render import render_ascii, render_svg
from .verify import (DEFAULT_BUDGET, REFUTED, UNKNOWN, VERIFIED, Verdict, cold_defect,
                     is_freezing, is_minimal, is_s_cold)

SCHEMA_VERSION = 1
EXIT = {VERIFIED: 0, REFUTED: 1, UNKNOWN: 2}
EXIT_USAGE = 3
EXIT_INPUT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pt(p):
    return list(p)


def _map_json(f: SelfMap | None):
    if f is None:
        return None
    return [[_pt(p), _pt(f(p))] for p in f.image.points if f(p) != p]


def _emit(args, payload: dict, text: str):
    if args.json:
        payload = {"schema": SCHEMA_VERSION, "command": args.command, **payload}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _load(args):
    doc = read_image(args.image, args.adjacency)
    return doc, doc.image


def _witness_text(f: SelfMap | None) -> str:
    if f is None or f.is_identity():
        return ""
    return f"witness (max displacement {f.max_displacement()}):\n" + format_map(f)


def cmd_check(args) -> int:
    doc, X = _load(args)
    A = doc.marked
    if args.mode == "freezing":
        v = is_freezing(X, A, args.budget)
    else:
        v = is_s_cold(X, A, args.s, args.budget)
    label = "freezing" if args.mode == "freezing" else f"{args.s}-cold"
    payload = {"status": v.status, "property": label, "nodes": v.nodes_explored,
               "budget_exhausted": v.budget_exhausted, "witness": _map_json(v.witness),
               "max_displacement": v.witness.max_displacement() if v.witness else None}
    text = f"{label} ({X.adjacency.name}, #X={len(X)}, #A={len(A)}): {v.status}\n"
    text += f"nodes explored: {v.nodes_explored}\n" + _witness_text(v.witness)
    _emit(args, payload, text)
    return EXIT[v.status]


def cmd_defect(args) -> int:
    doc, X = _load(args)
    s, v = cold_defect(X, doc.marked, args.budget)
    lo, hi = v.details.get("bounds", (s, s))
    payload = {"status": v.status, "defect": s if v.verified else None, "bounds": [lo, hi],
               "nodes": v.nodes_explored, "witness": _map_json(v.witness)}
    if v.verified:
        text = f"{s}\n" + _witness_text(v.witness)
    else:
        text = f"unknown: {lo} <= s* <= {hi} (budget exhausted)\n" + _witness_text(v.witness)
    _emit(args, payload, text)
    return EXIT[v.status]


def cmd_minimal(args) -> int:
    doc, X = _load(args)
    prop = "freezing" if args.mode == "freezing" else f"cold:{args.s}"
    v = is_minimal(X, doc.marked, prop, args.budget)
    dels = v.details.get("deletions", {})
    payload = {"status": v.status, "property": prop, "nodes": v.nodes_explored,
               "removable": _pt(v.details["removable"]) if "removable" in v.details else None,
               "deletions": [[_pt(a), _map_json(f)] for a, f in sorted(dels.items())]}
    lines = [f"minimal for {prop}: {v.status}"]
    if "removable" in v.details:
        lines.append(f"removable point: {v.details['removable']}")
    for a, f in sorted(dels.items()):
        lines.append(f"without {a}: fails, e.g. {f!r}")
    _emit(args, payload, "\n".join(lines))
    return EXIT[v.status]


def cmd_geometry(args) -> int:
    doc, X = _load(args)
    pts = X.pointset
    bd1, bd2 = sorted(geo.boundary(pts, 1)), sorted(geo.boundary(pts, 2))
    disk = geo.is_disk(pts, args.curve_budget)
    search = geo.bounding_curve_sets(pts, minimal=not args.all_curves, budget=args.curve_budget) \
        if X.is_connected() else None
    curves = []
    lines = [f"#X = {len(pts)}", f"Bd_1 ({len(bd1)}): {bd1}", f"Bd_2 ({len(bd2)}): {bd2}",
             f"disk: {'yes' if disk else 'no'}"]
    if search is not None:
        lines.append(f"bounding curve sets: {len(search)}"
                     + ("" if search.complete else " (search incomplete: budget)"))
        for cs in search:
            for c in cs.curves:
                entry = {"curve": [_pt(p) for p in c], "size": len(c), "angles": [],
                         "thick": None}
                lines.append(f"  curve ({len(c)} points): {list(c)}")
                try:
                    rep = geo.thickness_report(pts, c)
                    for a in rep.angles.values():
                        entry["angles"].append({"vertex": _pt(a.vertex), "degrees": a.degrees,
                                                "sides": list(a.side_kinds), "thick": a.thick})
                        lines.append(f"    vertex {a.vertex}: {a.degrees} deg, "
                                     f"{'/'.join(a.side_kinds)}"
                                     + ("" if a.thick is None else f", thick={a.thick}"))
                    entry["thick"] = rep.is_thick
                    lines.append(f"    thick along this curve: {rep.is_thick}")
                except geo.AmbiguousAngle as e:
                    lines.append(f"    angles ambiguous: {e}")
                curves.append(entry)
    conv = geo.is_digitally_convex(pts, args.curve_budget)
    lines.append(f"digitally convex: {conv.convex} ({conv.kind}); hull vertices {list(conv.hull_vertices)}")
    payload = {"bd1": [_pt(p) for p in bd1], "bd2": [_pt(p) for p in bd2], "disk": bool(disk),
               "curves": curves, "complete": search.complete if search else None,
               "convex": conv.convex, "hull_vertices": [_pt(p) for p in conv.hull_vertices]}
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_predict(args) -> int:
    doc, X = _load(args)
    pts = X.pointset
    preds = []
    if X.adjacency.u == 1 and len(pts) > 1:
        ranges = predict._is_box(pts)
        if ranges and all(hi > lo for lo, hi in ranges):
            preds.append(predict.corner_set(*ranges))
    preds.append(predict.bd1_prediction(X))
    if X.dim == 2:
        f = predict.convex_disk_c1_set if X.adjacency.u == 1 else predict.convex_disk_c2_set
        try:
            preds.append(f(pts))
        except ImageError:
            pass
    lines, out = [], []
    for p in preds:
        lines.append(f"{p.claim} ({p.adjacency}) [{p.source}]: {sorted(p.set)}")
        out.append({"claim": p.claim, "adjacency": p.adjacency, "source": p.source,
                    "set": [_pt(q) for q in sorted(p.set)]})
    ess = {}
    for kind in ("cold", "freezing"):
        rep = predict.essential_cold_points(X, kind=kind)
        ess[kind] = {"points": [[_pt(q), tags] for q, tags in sorted(rep.points.items())],
                     "diagnostics": [[_pt(q) if q else None, t, r] for q, t, r in rep.diagnostics]}
        lines.append(f"essential for every {kind} set ({X.adjacency.name}):")
        for q, tags in sorted(rep.points.items()):
            lines.append(f"  {q}: {', '.join(tags)}")
        for q, t, r in rep.diagnostics:
            lines.append(f"  excluded {q} [{t}]: {r}")
    _emit(args, {"predictions": out, "essential": ess}, "\n".join(lines))
    return 0


def cmd_corpus(args) -> int:
    from .corpus import FAIL, run_corpus
    t0 = time.perf_counter()
    results = run_corpus(args.filter, args.budget)
    total = time.perf_counter() - t0
    lines = []
    width = max((len(r.name) for r in results), default=4)
    for r in results:
        lines.append(f"{r.name:<{width}}  {r.status:<7}  {len(r.checks):>3} checks  {r.seconds:6.2f}s")
        if r.status != "PASS" or args.verbose:
            for c in r.checks:
                if c.status != "PASS" or args.verbose:
                    lines.append(f"    {c.status:<7} {c.label}: expected {c.expected!r}, got {c.observed!r}")
    lines.append(f"{sum(r.status == 'PASS' for r in results)}/{len(results)} cases PASS in {total:.1f}s")
    payload = {"cases": [{"name": r.name, "status": r.status, "seconds": r.seconds,
                          "checks": [{"label": c.label, "status": c.status,
                                      "expected": repr(c.expected), "observed": repr(c.observed)}
                                     for c in r.checks]} for r in results],
               "seconds": total}
    _emit(args, payload, "\n".join(lines))
    if not results:
        return EXIT_USAGE
    if any(r.status == FAIL for r in results):
        return 1
    return 2 if any(r.status != "PASS" for r in results) else 0


def cmd_render(args) -> int:
    doc, X = _load(args)
    f = None
    if args.witness:
        with open(args.witness, encoding="utf-8") as fh:
            f = parse_map(fh.read(), X)
    if args.format == "svg":
        out = render_svg(X, doc.marked, f, title=args.image)
    else:
        out = render_ascii(X, doc.marked, f)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="digifix", description="Verify freezing and cold sets of digital images.")
    ap.add_argument("--version", action="version", version=f"digifix {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def image_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--image", required=True, help="image file (grid or list format)")
        p.add_argument("--adjacency", help="override the file's adjacency, e.g. c1 or c2")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    def budget(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help=f"search node budget (default {DEFAULT_BUDGET})")

    p = image_cmd("check", "is A freezing / s-cold?")
    p.add_argument("--mode", choices=["freezing", "cold"], default="freezing")
    p.add_argument("--s", type=int, default=1)
    budget(p)
    p.set_defaults(func=cmd_check)

    p = image_cmd("defect", "least s such that A is s-cold")
    budget(p)
    p.set_defaults(func=cmd_defect)

    p = image_cmd("minimal", "is A minimal for the property?")
    p.add_argument("--mode", choices=["freezing", "cold"], default="freezing")
    p.add_argument("--s", type=int, default=1)
    budget(p)
    p.set_defaults(func=cmd_minimal)

    p = image_cmd("geometry", "boundaries, bounding curves, angles, thickness, convexity")
    p.add_argument("--all-curves", action="store_true", help="list non-minimal curves too")
    p.add_argument("--curve-budget", type=int, default=200_000)
    p.set_defaults(func=cmd_geometry)

    p = image_cmd("predict", "constructive sets and essential points")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("corpus", help="run the bundled example corpus")
    p.add_argument("--filter", help="only cases whose name contains this text")
    p.add_argument("--verbose", "-v", action="store_true", help="show every check")
    p.add_argument("--json", action="store_true")
    budget(p)
    p.set_defaults(func=cmd_corpus)

    p = image_cmd("render", "draw the image, A, and optionally a map")
    p.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    p.add_argument("--witness", help="map file with lines 'x y -> x2 y2'")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", 1) is not None and getattr(args, "budget", 1) < 1:
        print("digifix: error: --budget must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ImageError, OSError, ValueError) as e:
        if getattr(args, "json", False):
            print(json.dumps({"schema": SCHEMA_VERSION, "command": args.command,
                              "error": str(e), "kind": type(e).__name__}), file=sys.stderr)
        else:
            print(f"digifix {args.command}: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Bundled example images with their expected outcomes.

Each case loads one grid file from ``digifix/corpus/`` and runs a list of
checks; a check is PASS when the observed value equals the expectation,
UNKNOWN when the engine ran out of budget, FAIL otherwise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from . import geometry as geo
from . import predict
from .core import DigitalImage
from .formats import ImageDocument, parse_image
from .verify import (DEFAULT_BUDGET, UNKNOWN, VERIFIED, cold_defect, find_fixing_map,
                     is_freezing, is_minimal, is_s_cold)

PASS, FAIL = "PASS", "FAIL"


@dataclass
class CheckResult:
    label: str
    expected: object
    observed: object
    status: str


@dataclass
class CaseResult:
    name: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        return UNKNOWN.upper() if UNKNOWN.upper() in states else PASS


class _Checker:
    def __init__(self, budget):
        self.budget = budget
        self.results: list[CheckResult] = []

    def eq(self, label, expected, observed):
        self.results.append(CheckResult(label, expected, observed,
                                        PASS if expected == observed else FAIL))

    def verdict(self, label, expected_status, verdict):
        st = verdict.status
        status = PASS if st == expected_status else "UNKNOWN" if st == UNKNOWN else FAIL
        self.results.append(CheckResult(label, expected_status, st, status))

    def defect(self, label, expected, X, A, at_least=False):
        s, v = cold_defect(X, A, self.budget)
        if v.status == UNKNOWN:
            self.results.append(CheckResult(label, expected, f"unknown (>= {s})", "UNKNOWN"))
            return None
        ok = s >= expected if at_least else s == expected
        self.results.append(CheckResult(label, (">= " if at_least else "") + str(expected), s,
                                        PASS if ok else FAIL))
        return v


def load(name: str) -> ImageDocument:
    """Read a bundled image file by case name."""
    text = resources.files("digifix").joinpath("corpus", f"{name}.txt").read_text("utf-8")
    return parse_image(text)


def _essential_law(ck: _Checker, pts):
    """Deleting any essential point leaves a set that is not 1-cold."""
    for u in (1, 2):
        X = DigitalImage(pts, u)
        rep = predict.essential_cold_points(X, kind="cold")
        for p in sorted(rep.points):
            ck.defect(f"c{u} essential {p} [{','.join(rep.points[p])}]: defect without it", 2,
                      X, X.pointset - {p}, at_least=True)


def _case_diamond(ck, doc):
    D = doc.image.pointset
    S = D - {(0, 0)}
    ck.eq("Bd_1 = D minus origin", S, frozenset(geo.boundary(D, 1)))
    cs = geo.is_disk(D)
    ck.eq("is a disk", True, cs is not None)
    ck.eq("witness curve = D minus origin", S, cs.points if cs else None)
    ck.eq("curve is c1-connected", False, DigitalImage(S, 1).is_connected())
    rep = geo.jordan_components(S)
    ck.eq("bounded complement component", (frozenset({(0, 0)}),), rep.finite)
    edges, _ = geo.maximal_segments(cs.outer)
    ck.eq("edge kinds", ["slanted"] * 4, [geo.edge_kind(e) for e in edges])
    for u in (1, 2):
        ck.verdict(f"Bd_1 freezing (c{u})", VERIFIED, is_freezing(DigitalImage(D, u), S, ck.budget))


def _case_2scc(ck, doc):
    D = doc.image.pointset
    ck.eq("(2,2) in Bd_1", False, (2, 2) in geo.boundary(D, 1))
    ck.eq("(2,2) in Bd_2", True, (2, 2) in geo.boundary(D, 2))
    curves = geo.disk_curves(D, minimal=False)
    ck.eq("at least two bounding curves", True, len(curves) >= 2)
    c1_style = [c for c in curves if geo.is_closed_curve(c, 1)]
    ck.eq("c1-style curve found", True, bool(c1_style))
    smallest = min(len(c) for c in curves)
    ck.eq("c2 curve strictly smaller", True, bool(c1_style) and smallest < len(c1_style[0]))
    m = geo.disk_curves(D, minimal=True)[0]
    edges, verts = geo.maximal_segments(m)
    ck.eq("slanted edge (2,3)-(3,2) in minimal curve", True,
          any(set(e) == {(2, 3), (3, 2)} for e in edges))
    ck.eq("shown curves not c2-simple", [False, False],
          [geo.is_simple_closed_curve(m, 2), geo.is_simple_closed_curve(c1_style[0], 2)])


def _case_notdisk(ck, doc):
    D = doc.image.pointset
    ck.eq("is a disk", False, geo.is_disk(D) is not None)
    rep = geo.jordan_components(geo.boundary(D, 1))
    ck.eq("bounded components of Bd_1 complement",
          (frozenset({(1, 1), (2, 1)}), frozenset({(4, 1), (5, 1)})), rep.finite)


def _angle(pts, p, minimal=True):
    for c in geo.disk_curves(pts, minimal=minimal):
        if p in c:
            try:
                return geo.interior_angle(pts, c, p)
            except Exception:
                continue
    return None


def _case_90(ck, doc):
    X = doc.image
    pts = X.pointset
    a = _angle(pts, (0, 0))
    ck.eq("angle at (0,0)", (90, True), (a.degrees, a.thick) if a else None)
    ck.defect("c2 defect of X minus (0,0)", 1, X, doc.marked)
    ck.eq("(0,0) essential for c2", False,
          (0, 0) in predict.essential_cold_points(X, kind="cold"))
    c1 = X.with_adjacency(1)
    ck.eq("corners essential for c1", {(0, 0), (0, 2), (2, 0), (2, 2)},
          predict.essential_cold_points(c1, kind="cold").set & {(0, 0), (0, 2), (2, 0), (2, 2)})
    corners = predict.corner_set(2, 2)
    ck.verdict("corners minimal freezing (c1)", VERIFIED, is_minimal(corners.image, corners.set))
    bd = predict.bd1_prediction(X)
    ck.eq("Bd_1 claim under c2", predict.MINIMAL_FREEZING, bd.claim)
    ck.verdict("Bd_1 minimal freezing (c2)", VERIFIED, is_minimal(X, bd.set, budget=ck.budget))


def _case_90slanted(ck, doc):
    pts = doc.image.pointset
    tips = {(2, 0), (0, 2), (-2, 0), (0, -2)}
    S = geo.disk_curves(pts, minimal=True)[0]
    got = {a.vertex: (a.degrees, a.side_kinds, a.thick) for a in geo.vertex_angles(pts, S)}
    ck.eq("vertex angles", {v: (90, ("slanted", "slanted"), True) for v in tips}, got)
    p1 = predict.convex_disk_c1_set(pts)
    ck.eq("c1 set is the whole curve", frozenset(S), p1.set)
    ck.verdict("c1 set minimal freezing", VERIFIED, is_minimal(p1.image, p1.set, budget=ck.budget))
    p2 = predict.convex_disk_c2_set(pts)
    ck.eq("c2 set is the four tips", frozenset(tips), p2.set)
    ck.verdict("c2 tips minimal 1-cold", VERIFIED,
               is_minimal(p2.image, p2.set, "cold:1", budget=ck.budget))


def _case_135(ck, doc):
    X = doc.image
    pts = X.pointset
    a = _angle(pts, (0, 0))
    ck.eq("angle at (0,0)", (135, True), (a.degrees, a.thick) if a else None)
    ck.defect("c2 defect of X minus (0,0)", 1, X, doc.marked)
    ck.eq("(0,0) essential for c1", True,
          (0, 0) in predict.essential_cold_points(X.with_adjacency(1), kind="cold"))
    ck.eq("(0,0) forced into c2 freezing sets", True,
          (0, 0) in predict.essential_cold_points(X, kind="freezing"))
    ck.verdict("X minus (0,0) not freezing (c2)", "refuted", is_freezing(X, doc.marked, ck.budget))


def _case_225(ck, doc):
    X = doc.image
    a = _angle(X.pointset, (2, 2))
    ck.eq("angle at (2,2)", 225, a.degrees if a else None)
    for u in (1, 2):
        ck.verdict(f"X minus (2,2) freezing (c{u})", VERIFIED,
                   is_freezing(X.with_adjacency(u), doc.marked, ck.budget))


def _case_union(ck, doc):
    X = doc.image
    pts = X.pointset
    m = geo.disk_curves(pts, minimal=True)
    ck.eq("minimal curve bypasses (2,2) via (1,2),(2,3)", True,
          bool(m) and all((2, 2) not in c and {(1, 2), (2, 3)} <= set(c) for c in m))
    a = _angle(pts, (2, 2), minimal=False)
    ck.eq("angle at (2,2) on a c1-style curve", 270, a.degrees if a else None)
    ck.verdict("A minimal freezing (c1)", VERIFIED, is_minimal(X, doc.marked, budget=ck.budget))
    B = {(0, i) for i in range(3)} | {(j, 0) for j in range(5)} | {(4, k) for k in range(4)}
    B |= {(1, 2), (2, 3), (3, 3)}
    ck.verdict("B freezing (c2)", VERIFIED, is_freezing(X.with_adjacency(2), B, ck.budget))
    ck.eq("(2,2) in A or B", False, (2, 2) in doc.marked or (2, 2) in B)
    ck.eq("digitally convex", False, geo.is_digitally_convex(pts).convex)


def _case_270slant(ck, doc):
    X = doc.image
    pts = X.pointset
    a = _angle(pts, (2, 2))
    ck.eq("angle at (2,2)", (270, ("slanted", "slanted")), (a.degrees, a.side_kinds) if a else None)
    for u in (1, 2):
        ck.verdict(f"X minus (2,2) freezing (c{u})", VERIFIED,
                   is_freezing(X.with_adjacency(u), doc.marked, ck.budget))
    ck.eq("digitally convex", False, geo.is_digitally_convex(pts).convex)


def _case_315(ck, doc):
    pts = doc.image.pointset
    p = (3, 1)
    ck.eq("interior point on no bounding curve", True,
          all(p not in c for c in geo.disk_curves(pts, minimal=False)))
    ck.eq("thick convex disk", True, bool(predict._thick_convex_curves(pts, False, 200_000)))
    for f in (predict.convex_disk_c1_set, predict.convex_disk_c2_set):
        pr = f(pts)
        ck.eq(f"{pr.source} avoids {p}", False, p in pr.set)
        ck.verdict(f"{pr.source} freezing", VERIFIED, is_freezing(pr.image, pr.set, ck.budget))


def _case_square(n):
    def run(ck, doc):
        c2, c1 = predict.n_cold_corner_prediction(n)
        v = ck.defect(f"c2 defect of corners, n={n}", n, c2.image, c2.set)
        if v is not None:
            f = v.witness
            ck.eq("witness continuous and fixes A", True,
                  f.is_continuous() and f.fixes(c2.set))
            hit = [p for p in f.argmax_displacement() if p[0] == 0]
            if not hit:
                w = find_fixing_map(c2.image, c2.set, (0, n),
                                    [q for q in c2.image.points if c2.image.distance((0, n), q) == n],
                                    ck.budget)
                hit = [(0, n)] if w.status == VERIFIED and w.witness.is_continuous() else []
            ck.eq("displacement n attained with first coordinate 0", True, bool(hit))
        ck.defect(f"c1 defect of corners, n={n}", 0, c1.image, c1.set)
    return run


def _case_tee(ck, doc):
    X = doc.image
    pts = X.pointset
    axis = [c for c in geo.disk_curves(pts, minimal=False) if geo.is_closed_curve(c, 1)]
    ck.eq("axis-parallel bounding curve", True, bool(axis))
    S = axis[0]
    ck.eq("A satisfies the no-adjacent-gap rule", True,
          predict.axis_parallel_cold_set_valid(pts, S, doc.marked))
    ck.verdict("A is 1-cold (c2)", VERIFIED, is_s_cold(X, doc.marked, 1, ck.budget))
    moved = []
    for x in sorted(pts - set(S)):
        w = find_fixing_map(X, doc.marked, x, pts - {x}, ck.budget)
        if w.status != "refuted":
            moved.append((x, w.status))
    ck.eq("fixing maps are the identity on the interior", [], moved)


def _case_convex(ck, doc):
    pts = doc.image.pointset
    for f in (predict.convex_disk_c1_set, predict.convex_disk_c2_set):
        pr = f(pts)
        ck.verdict(f"{pr.source} set minimal freezing", VERIFIED,
                   is_minimal(pr.image, pr.set, budget=ck.budget))
    ck.eq("digitally convex", True, geo.is_digitally_convex(pts).convex)


def _case_rectangle(ck, doc):
    _case_convex(ck, doc)
    corners = predict.corner_set(3, 2)
    ck.eq("c1 set = corners", corners.set, predict.convex_disk_c1_set(doc.image.pointset).set)
    c3 = predict.corner_set(3, 3)
    ck.verdict("[0,3]^2 corners minimal freezing (c1)", VERIFIED,
               is_minimal(c3.image, c3.set, budget=ck.budget))


CASES: dict[str, Callable] = {
    "diamond": _case_diamond,
    "2sccBdry": _case_2scc,
    "notDisk": _case_notdisk,
    "degrees90": _case_90,
    "degrees90slanted": _case_90slanted,
    "degrees135": _case_135,
    "degrees225": _case_225,
    "unionRectangles": _case_union,
    "degrees270slant": _case_270slant,
    "degrees315": _case_315,
    "c2Square1": _case_square(1),
    "c2Square2": _case_square(2),
    "c2Square3": _case_square(3),
    "tee": _case_tee,
    "octagon": _case_convex,
    "rectangle": _case_rectangle,
}

# cases whose images meet the essential-point hypotheses non-vacuously
ESSENTIAL_LAW = ("diamond", "2sccBdry", "degrees90", "degrees90slanted", "degrees135",
                 "degrees225", "unionRectangles", "degrees270slant", "degrees315",
                 "c2Square1", "c2Square2", "tee", "octagon", "rectangle")


def run_case(name: str, budget: int = DEFAULT_BUDGET) -> CaseResult:
    t0 = time.perf_counter()
    doc = load(name)
    ck = _Checker(budget)
    try:
        CASES[name](ck, doc)
        if name in ESSENTIAL_LAW:
            _essential_law(ck, doc.image.pointset)
    except Exception as e:  # a crash in a check is a failure, not an abort
        ck.results.append(CheckResult("error", "no exception", f"{type(e).__name__}: {e}", FAIL))
    return CaseResult(name, ck.results, time.perf_counter() - t0)


def run_corpus(filter: str | None = None, budget: int = DEFAULT_BUDGET) -> list[CaseResult]:
    names = [n for n in CASES if filter is None or filter.lower() in n.lower()]
    return [run_case(n, budget) for n in names]

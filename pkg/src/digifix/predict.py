"""Constructive freezing/cold sets and essential points for planar images.

These are fast predictors: each one encodes a known structural result,
checks its hypotheses on the given image, and carries enough data (a
source tag, and for essential points an explicit witness map) for the
verify engine to confirm it independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from . import geometry as geo
from .core import Adjacency, DigitalImage, ImageError, lattice_boundary
from .maps import SelfMap

FREEZING = "freezing"
MINIMAL_FREEZING = "minimal-freezing"
S_COLD = "s-cold"
MINIMAL_COLD = "minimal-cold"


@dataclass(frozen=True)
class Prediction:
    """A claimed property of ``set`` inside ``image``."""

    image: DigitalImage
    set: frozenset
    claim: str
    source: str
    s: int | None = None          # for s-cold claims: the exact cold defect
    notes: str = ""

    def __post_init__(self):
        if not self.set <= self.image.pointset:
            raise ImageError("predicted set is not a subset of the image")

    @property
    def adjacency(self) -> str:
        return self.image.adjacency.name


def _as_image(X, adjacency=None) -> DigitalImage:
    if isinstance(X, DigitalImage):
        return X if adjacency is None else X.with_adjacency(adjacency)
    return DigitalImage(X, 1 if adjacency is None else adjacency)


# -- boxes and boundaries ----------------------------------------------------

def corner_set(*sides, adjacency: int = 1) -> Prediction:
    """Corners of a box; each side is m (meaning [0, m]) or a (lo, hi) pair.

    Claimed freezing for c_1, and minimal in dimensions 1 and 2.
    """
    ranges = [(0, s) if isinstance(s, int) else tuple(s) for s in sides]
    if not ranges or any(hi - lo < 1 for lo, hi in ranges):
        raise ImageError("every interval must have at least two points")
    if adjacency != 1:
        raise ImageError("the corner result is stated for c_1")
    img = DigitalImage(product(*(range(lo, hi + 1) for lo, hi in ranges)), 1)
    corners = frozenset(product(*ranges))
    claim = MINIMAL_FREEZING if len(ranges) <= 2 else FREEZING
    return Prediction(img, corners, claim, "box-corners")


def _is_box(pts: frozenset) -> list | None:
    dim = len(next(iter(pts)))
    ranges = [(min(p[i] for p in pts), max(p[i] for p in pts)) for i in range(dim)]
    size = 1
    for lo, hi in ranges:
        size *= hi - lo + 1
    return ranges if size == len(pts) else None


def bd1_prediction(X, adjacency=None) -> Prediction:
    """Bd_1(X) is freezing for every c_u; minimal for c_n on fat boxes."""
    img = _as_image(X, adjacency)
    A = frozenset(lattice_boundary(img.pointset, 1))
    ranges = _is_box(img.pointset)
    if (ranges and img.adjacency.u == img.dim
            and all(hi - lo > 1 for lo, hi in ranges)):
        return Prediction(img, A, MINIMAL_FREEZING, "box-boundary-minimal")
    return Prediction(img, A, FREEZING, "boundary-freezes")


# -- thick convex disks ---------------------------------------------------------

def _thick_convex_curves(pts, minimal: bool, budget: int) -> list[tuple]:
    if geo.is_disk(pts, budget) is None:
        return []
    hull = set(geo.hull_vertices(pts))
    out = []
    for c in geo.disk_curves(pts, minimal=minimal, budget=budget):
        _, verts = geo.maximal_segments(c)
        if set(verts) != hull:
            continue
        try:
            if geo.thickness_report(pts, c).is_thick:
                out.append(c)
        except geo.AmbiguousAngle:
            continue
    return out


def thick_convex_curve(X, minimal: bool = False, budget: int = 200_000) -> tuple:
    """A bounding curve witnessing that X is a thick convex disk."""
    pts = geo._pointset(X)
    curves = _thick_convex_curves(pts, minimal, budget)
    if not curves:
        raise ImageError("image is not a thick convex disk (no witnessing bounding curve)")
    return curves[0]


def convex_disk_c1_set(X, budget: int = 200_000) -> Prediction:
    """Axis-parallel edge endpoints plus all slanted edges; minimal freezing for c_1."""
    pts = geo._pointset(X)
    S = thick_convex_curve(pts, minimal=False, budget=budget)
    edges, _ = geo.maximal_segments(S)
    A = set()
    for e in edges:
        if geo.edge_kind(e) == "slanted":
            A.update(e)
        else:
            A.update((e[0], e[-1]))
    return Prediction(DigitalImage(pts, 1), frozenset(A), MINIMAL_FREEZING, "convex-disk-c1",
                      notes=f"curve of {len(S)} points")


def convex_disk_c2_set(X, budget: int = 200_000) -> Prediction:
    """Slanted edge endpoints plus all axis-parallel edges; minimal freezing for c_2."""
    pts = geo._pointset(X)
    S = thick_convex_curve(pts, minimal=True, budget=budget)
    edges, _ = geo.maximal_segments(S)
    B = set()
    for e in edges:
        if geo.edge_kind(e) == "slanted":
            B.update((e[0], e[-1]))
        else:
            B.update(e)
    return Prediction(DigitalImage(pts, 2), frozenset(B), MINIMAL_FREEZING, "convex-disk-c2",
                      notes=f"curve of {len(S)} points")


def axis_parallel_cold_set_valid(X, S, A) -> bool:
    """A inside S with no two c_1-adjacent curve points both missing from A.

    When true, A is predicted 1-cold for c_2 and every c_2-continuous map
    fixing A is the identity on the interior.
    """
    curve = [tuple(p) for p in S]
    m = len(curve)
    for i in range(m):
        d = geo._sub(curve[(i + 1) % m], curve[i])
        if d[0] and d[1]:
            raise ImageError("bounding curve has a slanted step")
    Sset = set(curve)
    A = {tuple(a) for a in A}
    if not A <= Sset:
        return False
    missing = Sset - A
    return not any(geo._add(p, d) in missing for p in missing for d in geo.C1_OFFSETS)


def n_cold_corner_prediction(n: int) -> tuple[Prediction, Prediction]:
    """Corners of [-n, n]^2: exact cold defect n under c_2, freezing under c_1."""
    if n < 1:
        raise ImageError("n must be at least 1")
    pts = list(product(range(-n, n + 1), repeat=2))
    A = frozenset(product((-n, n), repeat=2))
    c2 = Prediction(DigitalImage(pts, 2), A, S_COLD, "square-corners-c2", s=n)
    c1 = Prediction(DigitalImage(pts, 1), A, FREEZING, "box-corners", s=0)
    return c2, c1


# -- essential points -----------------------------------------------------------

@dataclass
class EssentialReport:
    """Points forced into every cold (or freezing) set, with their sources.

    ``witnesses[(p, tag)]`` is the proof's map moving only p; its
    displacement is at least 2 for cold-kind tags and at least 1 for
    freezing-only tags.  ``diagnostics`` lists (point, tag, reason) for
    candidates excluded because a hypothesis failed.
    """

    adjacency: str
    kind: str
    points: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def __iter__(self):
        return iter(sorted(self.points))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def set(self) -> frozenset:
        return frozenset(self.points)

    def tagged(self, tag: str) -> set:
        return {p for p, tags in self.points.items() if tag in tags}


FREEZING_ONLY_TAGS = {"135-c2-freezing"}


def _add_point(rep: EssentialReport, img: DigitalImage, p, tag: str, target, min_disp: int):
    """Record p if the map moving only p to ``target`` is a valid witness."""
    if target is None:
        rep.points.setdefault(p, [])
        if tag not in rep.points[p]:
            rep.points[p].append(tag)
        return
    if target not in img:
        rep.diagnostics.append((p, tag, f"witness target {target} not in X"))
        return
    f = SelfMap.from_dict(img, {p: target})
    if not f.is_continuous():
        rep.diagnostics.append((p, tag, "constructed map is not continuous"))
        return
    if img.distance(p, target) < min_disp:
        rep.diagnostics.append((p, tag, "constructed map moves p too little"))
        return
    rep.points.setdefault(p, [])
    if tag not in rep.points[p]:
        rep.points[p].append(tag)
    rep.witnesses.setdefault((p, tag), f)


def _scale(d, k):
    return (d[0] * k, d[1] * k)


def _is_diag(d) -> bool:
    return bool(d[0] and d[1])


def essential_cold_points(X, adjacency=None, kind: str = "cold",
                          budget: int = 200_000) -> EssentialReport:
    """Union of the points the vertex and neighbor results force into A.

    ``kind`` is 'cold' (every cold set) or 'freezing' (every freezing set;
    a superset, since freezing sets are cold).
    """
    if kind not in ("cold", "freezing"):
        raise ValueError("kind must be 'cold' or 'freezing'")
    img = _as_image(X, adjacency)
    u = img.adjacency.u
    rep = EssentialReport(img.adjacency.name, kind)
    if not img.is_connected():
        rep.diagnostics.append((None, "*", "image is not connected"))
        return rep

    # a point with a single neighbor can be pushed two steps
    if len(img) > 2:
        for p in img.points:
            nb = img.neighborhood(p)
            if len(nb) == 1:
                (p1,) = nb
                q = min(img.neighborhood(p1) - {p})
                _add_point(rep, img, p, "single-neighbor", q, 2)

    if img.dim != 2 or u not in (1, 2):
        return rep
    pts = img.pointset
    try:
        found = geo.bounding_curve_sets(pts, minimal=True, budget=budget)
    except ImageError as e:
        rep.diagnostics.append((None, "*", f"no bounding curves: {e}"))
        return rep
    if not found.curve_sets:
        rep.diagnostics.append((None, "*", "no minimal bounding curve set found"))
        return rep
    is_disk = geo.is_disk(pts, budget) is not None
    hull = set(geo.hull_vertices(pts))

    for cs in found:
        S = cs.outer
        try:
            angles = geo.vertex_angles(pts, S)
            thick = geo.thickness_report(pts, S)
        except geo.AmbiguousAngle as e:
            rep.diagnostics.append((None, "*", str(e)))
            continue
        for a in angles:
            p = a.vertex
            i = S.index(p)
            dirs = (geo._sub(S[i - 1], p), geo._sub(S[(i + 1) % len(S)], p))
            if a.degrees == 45:
                ds = next(d for d in dirs if _is_diag(d))
                da = next(d for d in dirs if not _is_diag(d))
                if u == 1:
                    _add_point(rep, img, p, "45-c1", geo._add(p, ds), 2)
                else:
                    q = geo._add(p, ds)
                    edge = next(e for e in geo.maximal_segments(S)[0]
                                if p in (e[0], e[-1]) and q in e)
                    if q in (edge[0], edge[-1]):
                        rep.diagnostics.append((p, "45-c2", "slanted side too short"))
                    elif not geo.slant_thick_at(pts, S, q):
                        rep.diagnostics.append((p, "45-c2", f"not slant-thick at {q}"))
                    else:
                        _add_point(rep, img, p, "45-c2", geo._add(p, _scale(da, 2)), 2)
            elif a.degrees == 90:
                if not a.thick:
                    rep.diagnostics.append((p, "90", "not 90-thick"))
                    continue
                (bis,) = a.sector
                if a.side_kinds == ("slanted", "slanted"):
                    _add_point(rep, img, p, "90-slanted", geo._add(p, _scale(bis, 2)), 2)
                elif u == 1:
                    _add_point(rep, img, p, "90-axis-c1", geo._add(p, bis), 2)
            elif a.degrees == 135:
                if not a.thick:
                    rep.diagnostics.append((p, "135", "not 135-thick"))
                    continue
                b = next(d for d in a.sector if _is_diag(d))
                b1 = next(d for d in a.sector if not _is_diag(d))
                if u == 1:
                    _add_point(rep, img, p, "135-c1", geo._add(p, b), 2)
                elif kind == "freezing":
                    if is_disk:
                        _add_point(rep, img, p, "135-c2-freezing", geo._add(p, b1), 1)
                    else:
                        rep.diagnostics.append((p, "135-c2-freezing", "image is not a disk"))

        if u == 1 and is_disk and len(cs.curves) == 1 and thick.is_thick:
            edges, verts = geo.maximal_segments(S)
            if set(verts) == hull:
                for v in sorted(hull):
                    _add_point(rep, img, v, "hull-vertex-c1", None, 2)
            for e in edges:
                if geo.edge_kind(e) != "slanted":
                    continue
                d = geo._sub(e[1], e[0])
                left = (-d[1], d[0])
                c_dir = left if geo.signed_area2(S) > 0 else _scale(left, -1)
                for p in e[1:-1]:
                    _add_point(rep, img, p, "slant-inner-c1", geo._add(p, c_dir), 2)
    for p, tags in rep.points.items():
        tags.sort()
    return rep

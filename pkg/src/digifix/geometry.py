"""Planar digital geometry: boundaries, closed curves, disks, angles, convexity.

Everything here is Z^2-only.  Curves are tuples of points in cyclic order,
consecutive points c_2-adjacent, no repeats; they are normalized to start
at their least point.  Complementary components are computed inside the
bounding box inflated by two cells; the component touching the frame is
the unbounded one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage

from .core import DigitalImage, ImageError, lattice_boundary

C1_OFFSETS = ((1, 0), (0, 1), (-1, 0), (0, -1))
C2_OFFSETS = C1_OFFSETS + ((1, 1), (-1, 1), (-1, -1), (1, -1))

# direction index k <-> angle 45k degrees, counterclockwise from +x
DIRECTIONS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
DIR_INDEX = {d: k for k, d in enumerate(DIRECTIONS)}

_STRUCT = {1: ndimage.generate_binary_structure(2, 1), 2: ndimage.generate_binary_structure(2, 2)}


class AmbiguousAngle(ImageError):
    """The interior side at a vertex cannot be decided consistently."""


def _pointset(X) -> frozenset:
    if isinstance(X, DigitalImage):
        if X.dim != 2:
            raise ImageError("planar geometry needs an image in Z^2")
        return X.pointset
    pts = frozenset(tuple(int(c) for c in p) for p in X)
    if any(len(p) != 2 for p in pts):
        raise ImageError("planar geometry needs points in Z^2")
    return pts


def _add(p, d):
    return (p[0] + d[0], p[1] + d[1])


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def c1_adjacent(p, q) -> bool:
    return abs(p[0] - q[0]) + abs(p[1] - q[1]) == 1


def c2_adjacent(p, q) -> bool:
    return p != q and abs(p[0] - q[0]) <= 1 and abs(p[1] - q[1]) <= 1


# -- boundaries --------------------------------------------------------------

def boundary(X, i: int = 1) -> set:
    """Bd_i(X): points of X with a c_i-neighbor in Z^2 outside X."""
    if i not in (1, 2):
        raise ImageError("boundary index must be 1 or 2")
    return lattice_boundary(_pointset(X), i)


def interior(X, i: int = 1) -> set:
    """Int_i(X) = X minus Bd_i(X)."""
    pts = _pointset(X)
    return set(pts) - boundary(pts, i)


# -- segments ----------------------------------------------------------------

def classify_segment(points: Sequence) -> str:
    """'horizontal', 'vertical', 'slanted' or 'not-a-segment'.

    A digital segment is a collinear set whose consecutive points (along the
    line) are unit steps, so the slope is 0, infinite or +-1.
    """
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) < 2:
        return "not-a-segment"
    steps = {_sub(b, a) for a, b in zip(pts, pts[1:])}
    if len(steps) != 1:
        return "not-a-segment"
    step = steps.pop()
    return {(1, 0): "horizontal", (0, 1): "vertical",
            (1, 1): "slanted", (1, -1): "slanted"}.get(step, "not-a-segment")


# -- complementary components ------------------------------------------------

class _Grid:
    """Occupancy raster of a point set inside its 2-cell inflated box."""

    def __init__(self, pts: Iterable, pad: int = 2, extra: Iterable = ()):
        pts = list(pts)
        allp = pts + list(extra)
        xs = [p[0] for p in allp]
        ys = [p[1] for p in allp]
        self.x0, self.y0 = min(xs) - pad, min(ys) - pad
        self.shape = (max(xs) - self.x0 + pad + 1, max(ys) - self.y0 + pad + 1)
        self.occ = np.zeros(self.shape, dtype=bool)
        for p in pts:
            self.occ[p[0] - self.x0, p[1] - self.y0] = True

    def point(self, ij) -> tuple:
        return (int(ij[0]) + self.x0, int(ij[1]) + self.y0)

    def complement_components(self, adjacency: int = 1) -> tuple[frozenset, list[frozenset]]:
        """(unbounded component clipped to the box, bounded components)."""
        labels, count = ndimage.label(~self.occ, structure=_STRUCT[adjacency])
        frame = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])))
        frame.discard(0)
        outer: set = set()
        finite = []
        for lab in range(1, count + 1):
            comp = frozenset(self.point(ij) for ij in np.argwhere(labels == lab))
            if lab in frame:
                outer |= comp
            else:
                finite.append(comp)
        finite.sort(key=min)
        return frozenset(outer), finite


@dataclass(frozen=True)
class JordanReport:
    """Components of Z^2 minus S: bounded ones in full, the unbounded one clipped."""

    finite: tuple
    infinite: frozenset
    adjacency: int

    @property
    def count(self) -> int:
        return len(self.finite) + (1 if self.infinite else 0)

    @property
    def is_jordan(self) -> bool:
        """Exactly two components, one bounded and one unbounded."""
        return len(self.finite) == 1 and bool(self.infinite)

    @property
    def interior(self) -> frozenset:
        if not self.is_jordan:
            raise ImageError("curve does not have exactly one bounded complementary component")
        return self.finite[0]


def jordan_components(S: Iterable, complement_adjacency: int = 1) -> JordanReport:
    """Complementary components of a curve (or any finite set) S."""
    pts = _pointset(S)
    if not pts:
        raise ImageError("empty curve")
    outer, finite = _Grid(pts).complement_components(complement_adjacency)
    return JordanReport(tuple(finite), outer, complement_adjacency)


# -- closed curves -----------------------------------------------------------

def normalize_curve(curve: Sequence) -> tuple:
    """Rotate to start at the least point; orient so the second point < the last."""
    c = [tuple(p) for p in curve]
    k = c.index(min(c))
    c = c[k:] + c[:k]
    if len(c) > 2 and c[-1] < c[1]:
        c = [c[0]] + c[:0:-1]
    return tuple(c)


def is_closed_curve(curve: Sequence, adjacency: int = 2) -> bool:
    c = [tuple(p) for p in curve]
    if len(c) < (4 if adjacency == 2 else 8) or len(set(c)) != len(c):
        return False
    adj = c2_adjacent if adjacency == 2 else c1_adjacent
    return all(adj(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def is_simple_closed_curve(curve: Sequence, adjacency: int = 2) -> bool:
    if not is_closed_curve(curve, adjacency):
        return False
    adj = c2_adjacent if adjacency == 2 else c1_adjacent
    m = len(curve)
    for i, p in enumerate(curve):
        nbrs = {j for j, q in enumerate(curve) if adj(p, q)}
        if nbrs != {(i - 1) % m, (i + 1) % m}:
            return False
    return True


def signed_area2(curve: Sequence) -> int:
    """Twice the signed (shoelace) area; positive for counterclockwise curves."""
    s = 0
    m = len(curve)
    for i in range(m):
        (x1, y1), (x2, y2) = curve[i], curve[(i + 1) % m]
        s += x1 * y2 - x2 * y1
    return s


# -- disks and bounding curves ------------------------------------------------

@dataclass(frozen=True)
class CurveSet:
    """A validated set of bounding curves; curves[0] is the outer one."""

    curves: tuple
    host: frozenset
    certificates: tuple  # JordanReport per curve

    @property
    def outer(self) -> tuple:
        return self.curves[0]

    @property
    def points(self) -> frozenset:
        return frozenset(p for c in self.curves for p in c)

    def interior(self, j: int = 0) -> frozenset:
        return self.certificates[j].interior


@dataclass
class CurveSearch:
    """Result of :func:`bounding_curve_sets`."""

    curve_sets: list
    complete: bool
    nodes: int = 0
    diagnostics: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.curve_sets)

    def __len__(self):
        return len(self.curve_sets)

    def __getitem__(self, k):
        return self.curve_sets[k]


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, k=1) -> bool:
        self.used += k
        return self.used <= self.limit


def _hamiltonian_cycles(S: frozenset, budget: _Budget, max_cycles: int) -> list[tuple]:
    """All c_2 Hamiltonian cycles through S, normalized, in DFS order."""
    pts = sorted(S)
    if len(pts) < 4:
        return []
    nbrs = {p: [q for q in (_add(p, d) for d in C2_OFFSETS) if q in S] for p in pts}
    if any(len(v) < 2 for v in nbrs.values()):
        return []
    for v in nbrs.values():
        v.sort()
    start = pts[0]
    path = [start]
    on = {start}
    out: list[tuple] = []

    def viable(end) -> bool:
        for p in pts:
            if p in on:
                continue
            free = sum(1 for q in nbrs[p] if q not in on or q == end or q == start)
            if free < 2:
                return False
        return True

    def rec() -> bool:
        if not budget.spend():
            return False
        end = path[-1]
        if len(path) == len(pts):
            if c2_adjacent(end, start) and path[1] < path[-1]:
                out.append(tuple(path))
            return len(out) < max_cycles
        for q in nbrs[end]:
            if q in on:
                continue
            path.append(q)
            on.add(q)
            if viable(q) and not rec():
                return False
            path.pop()
            on.discard(q)
        return True

    rec()
    return out


def _curve_set_interior_ok(S, target_outer, target_inner) -> JordanReport | None:
    """Check Z^2 \\ S has one bounded c_1 component equal to ``target_inner``
    (when given) and an unbounded one equal to ``target_outer`` (when given)."""
    rep = jordan_components(S, 1)
    if not rep.is_jordan:
        return None
    if target_inner is not None and rep.finite[0] != target_inner:
        return None
    if target_outer is not None and rep.infinite != target_outer:
        return None
    return rep


def _sets_touch(U: Iterable, V: frozenset) -> bool:
    for p in U:
        if p in V or any(_add(p, d) in V for d in C2_OFFSETS):
            return True
    return False


def bounding_curve_sets(X, minimal: bool = True, budget: int = 200_000,
                        max_cycles: int = 16) -> CurveSearch:
    """Search validated sets of bounding curves for X.

    A bounding curve must contain every point of X that is c_1-adjacent to
    the complementary component it faces, and lies inside Bd_2(X); the
    search enumerates the optional Bd_2 points by increasing count, checks
    the complement condition, then enumerates Hamiltonian c_2-cycles.
    With ``minimal`` only curves of least point count are kept.
    """
    pts = _pointset(X)
    if not pts:
        raise ImageError("empty image")
    img = DigitalImage(pts, 2)
    if not img.is_connected():
        raise ImageError("bounding curves need a c_1- or c_2-connected image")
    b = _Budget(budget)
    grid = _Grid(pts)
    outer, holes = grid.complement_components(1)
    faces = [outer] + holes
    diagnostics = []

    per_face: list[list[tuple[tuple, JordanReport]]] = []
    for j, face in enumerate(faces):
        required = frozenset(p for p in pts if any(_add(p, d) in face for d in C1_OFFSETS))
        optional = sorted(p for p in pts if p not in required
                          and any(_add(p, d) in face for d in C2_OFFSETS))
        found: list[tuple[tuple, JordanReport]] = []
        for k in range(len(optional) + 1):
            for extra in combinations(optional, k):
                if not b.spend():
                    break
                S = required | frozenset(extra)
                rep = (_curve_set_interior_ok(S, outer, None) if j == 0
                       else _curve_set_interior_ok(S, None, face))
                if rep is None:
                    continue
                if j == 0 and not (pts - S) <= rep.finite[0]:
                    continue
                for cyc in _hamiltonian_cycles(S, b, max_cycles):
                    found.append((cyc, rep))
            if b.used > b.limit or (minimal and found):
                break
        if not found:
            diagnostics.append(f"no bounding curve for face {j} ({'outer' if j == 0 else 'hole'})")
        per_face.append(found)

    complete = b.used <= b.limit
    sets: list[CurveSet] = []
    if all(per_face):
        def rec(j, chosen):
            if j == len(per_face):
                curves = tuple(c for c, _ in chosen)
                flat = [p for c in curves for p in c]
                if len(flat) != len(set(flat)):
                    return
                blocks = [set(chosen[0][0]) | chosen[0][1].infinite]
                blocks += [set(c) | rep.finite[0] for c, rep in chosen[1:]]
                for u, v in combinations(range(len(blocks)), 2):
                    if _sets_touch(blocks[u], frozenset(blocks[v])):
                        return
                sets.append(CurveSet(curves, pts, tuple(r for _, r in chosen)))
                return
            for item in per_face[j]:
                rec(j + 1, chosen + [item])

        rec(0, [])
    sets.sort(key=lambda cs: (sum(len(c) for c in cs.curves),
                              sum(len(maximal_segments(c)[1]) for c in cs.curves), cs.curves))
    return CurveSearch(sets, complete, b.used, diagnostics)


def is_disk(D, budget: int = 200_000) -> CurveSet | None:
    """A witnessing (minimal) bounding curve if D is a digital disk, else None."""
    pts = _pointset(D)
    outer, holes = _Grid(pts).complement_components(1)
    if holes or not DigitalImage(pts, 2).is_connected():
        return None
    found = bounding_curve_sets(pts, minimal=True, budget=budget)
    for cs in found:
        if len(cs.curves) == 1 and cs.outer and (set(cs.outer) | cs.interior()) == set(pts):
            return cs
    return None


def disk_curves(D, minimal: bool = False, budget: int = 200_000) -> list[tuple]:
    """All bounding curves of the disk D found within the budget."""
    return [cs.outer for cs in bounding_curve_sets(D, minimal=minimal, budget=budget)
            if len(cs.curves) == 1]


# -- segments, vertices and angles ----------------------------------------------

def maximal_segments(curve: Sequence) -> tuple[list[tuple], list]:
    """Split a closed curve into maximal straight runs.

    Returns (edges, vertices): each edge is the tuple of its points from one
    vertex to the next along the curve; vertices are listed in curve order.
    """
    c = [tuple(p) for p in curve]
    m = len(c)
    if m < 3 or not all(c2_adjacent(c[i], c[(i + 1) % m]) for i in range(m)):
        raise ImageError("not a closed c_2-curve")
    steps = [_sub(c[(i + 1) % m], c[i]) for i in range(m)]
    vidx = [i for i in range(m) if steps[i - 1] != steps[i]]
    if not vidx:
        raise ImageError("a closed curve cannot be a single straight run")
    edges = []
    for a, bnext in zip(vidx, vidx[1:] + [vidx[0] + m]):
        edges.append(tuple(c[k % m] for k in range(a, bnext + 1)))
    return edges, [c[i] for i in vidx]


def edge_kind(edge: Sequence) -> str:
    d = _sub(edge[1], edge[0])
    return "slanted" if d[0] and d[1] else "axis-parallel"


@dataclass(frozen=True)
class AngleReport:
    vertex: tuple
    degrees: int
    side_kinds: tuple       # kinds of the incoming and outgoing edge
    thick: bool | None      # applicable thickness predicate; None if none applies
    sector: tuple = ()      # interior-side neighbor directions strictly inside the angle


def _orientation(curve) -> int:
    a = signed_area2(curve)
    if a == 0:
        raise AmbiguousAngle("curve has zero signed area; orientation undefined")
    return 1 if a > 0 else -1


def _curve_interior(X, curve) -> frozenset:
    rep = jordan_components(curve, 1)
    if not rep.finite:
        return frozenset()
    return frozenset().union(*rep.finite)


def _angle_parts(X, curve, p):
    """(degrees, inside_dirs, u, v, incoming, outgoing edge step) at vertex p."""
    c = list(curve)
    if p not in c:
        raise ImageError(f"{p} is not on the curve")
    i = c.index(p)
    m = len(c)
    d_in = _sub(p, c[i - 1])
    d_out = _sub(c[(i + 1) % m], p)
    if d_in == d_out:
        raise ImageError(f"{p} is not a vertex of the curve")
    ku = DIR_INDEX[(-d_in[0], -d_in[1])]
    kv = DIR_INDEX[d_out]
    orient = _orientation(c)
    span = (ku - kv) % 8 if orient > 0 else (kv - ku) % 8
    lo = kv if orient > 0 else ku
    inside = tuple(DIRECTIONS[(lo + t) % 8] for t in range(1, span))
    outside = tuple(DIRECTIONS[(lo + span + t) % 8] for t in range(1, 8 - span))
    return 45 * span, inside, outside, d_in, d_out


def interior_angle(X, curve: Sequence, p) -> AngleReport:
    """Interior angle of the disk X at vertex p of its bounding curve.

    The interior side comes from the curve's orientation and is checked
    against the neighborhood: if a point of Int(S) or of X \\ S lies strictly
    inside the opposite sector, :class:`AmbiguousAngle` is raised.
    """
    pts = _pointset(X)
    p = tuple(p)
    curve = tuple(tuple(q) for q in curve)
    deg, inside, outside, d_in, d_out = _angle_parts(pts, curve, p)
    S = set(curve)
    inner = _curve_interior(pts, curve) | (pts - S)
    if any(_add(p, d) in inner for d in outside):
        raise AmbiguousAngle(f"interior-side points on both sides of the angle at {p}")
    kinds = tuple("slanted" if d[0] and d[1] else "axis-parallel" for d in (d_in, d_out))
    return AngleReport(p, deg, kinds, _thick_at_vertex(pts, curve, p, deg, inside, kinds),
                       inside)


def vertex_angles(X, curve: Sequence) -> list[AngleReport]:
    _, vertices = maximal_segments(curve)
    return [interior_angle(X, curve, v) for v in vertices]


# -- thickness -----------------------------------------------------------------

def _thick_at_vertex(pts, curve, p, deg, inside, kinds):
    int_s = _curve_interior(pts, curve) & pts
    if deg == 90:
        if kinds == ("axis-parallel", "axis-parallel"):
            q = [d for d in inside if d[0] and d[1]]
        else:
            q = [d for d in inside if not (d[0] and d[1])]
        return len(q) == 1 and _add(p, q[0]) in int_s
    if deg == 135:
        diag = [d for d in inside if d[0] and d[1]]
        axis = [d for d in inside if not (d[0] and d[1])]
        return (len(diag) == 1 and len(axis) == 1
                and _add(p, diag[0]) in pts and _add(p, axis[0]) in pts)
    return None


def slant_thick_at(X, curve: Sequence, p) -> bool:
    """Slant-thickness at a non-endpoint p of a maximal slanted segment.

    The witness c is the diagonal neighbor of p perpendicular to the
    segment on the interior side.
    """
    pts = _pointset(X)
    curve = tuple(tuple(q) for q in curve)
    p = tuple(p)
    edges, _ = maximal_segments(curve)
    for e in edges:
        if p in e[1:-1] and edge_kind(e) == "slanted":
            d = _sub(e[1], e[0])
            left = (-d[1], d[0])
            c_dir = left if _orientation(curve) > 0 else (-left[0], -left[1])
            return _add(p, c_dir) in pts
    raise ImageError(f"{p} is not an inner point of a maximal slanted segment")


@dataclass
class ThicknessReport:
    slant: dict            # inner slanted-segment point -> bool
    vertex: dict           # 90/135 degree vertex -> bool
    angles: dict           # vertex -> AngleReport

    @property
    def is_thick(self) -> bool:
        return all(self.slant.values()) and all(self.vertex.values())

    def failures(self) -> list:
        return sorted([p for p, ok in self.slant.items() if not ok]
                      + [p for p, ok in self.vertex.items() if not ok])


def thickness_report(X, curve: Sequence) -> ThicknessReport:
    pts = _pointset(X)
    curve = tuple(tuple(q) for q in curve)
    edges, vertices = maximal_segments(curve)
    slant = {}
    for e in edges:
        if edge_kind(e) == "slanted":
            for p in e[1:-1]:
                slant[p] = slant_thick_at(pts, curve, p)
    angles = {v: interior_angle(pts, curve, v) for v in vertices}
    vertex = {v: a.thick for v, a in angles.items() if a.degrees in (90, 135)}
    return ThicknessReport(slant, vertex, angles)


def thick_curves(X, budget: int = 200_000) -> list[tuple]:
    """Bounding curves of the disk X along which X is thick."""
    out = []
    for c in disk_curves(X, minimal=False, budget=budget):
        try:
            if thickness_report(X, c).is_thick:
                out.append(c)
        except AmbiguousAngle:
            continue
    return out


def is_thick(X, budget: int = 200_000) -> bool:
    """Thick for some bounding curve (over the curves the search discovers)."""
    return bool(thick_curves(X, budget))


# -- convexity -----------------------------------------------------------------

def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_vertices(points: Iterable) -> list:
    """Vertices of the Euclidean convex hull, counterclockwise, exact integers.

    Collinear boundary points are not vertices.
    """
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and _cross(h[-2], h[-1], p) <= 0:
                h.pop()
            h.append(p)
        return h

    lower, upper = half(pts), half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def in_hull(points: Iterable, q) -> bool:
    """Exact closed-hull membership test."""
    h = hull_vertices(points)
    if len(h) == 1:
        return tuple(q) == h[0]
    if len(h) == 2:
        a, b = h
        if _cross(a, b, q) != 0:
            return False
        t = Fraction((q[0] - a[0]) * (b[0] - a[0]) + (q[1] - a[1]) * (b[1] - a[1]),
                     (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2)
        return 0 <= t <= 1
    return all(_cross(h[i], h[(i + 1) % len(h)], q) >= 0 for i in range(len(h)))


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    kind: str                 # 'point', 'segment', 'disk', or 'none'
    hull_vertices: tuple
    curve: tuple | None = None
    curve_vertices: tuple = ()


def is_digitally_convex(X, budget: int = 200_000) -> ConvexityReport:
    pts = _pointset(X)
    hv = tuple(hull_vertices(pts))
    if len(pts) == 1:
        return ConvexityReport(True, "point", hv)
    if classify_segment(pts) != "not-a-segment":
        return ConvexityReport(True, "segment", hv)
    if is_disk(pts, budget) is None:
        return ConvexityReport(False, "none", hv)
    target = set(hv)
    first = None
    for c in disk_curves(pts, minimal=False, budget=budget):
        _, verts = maximal_segments(c)
        if first is None:
            first = (c, tuple(verts))
        if set(verts) == target:
            return ConvexityReport(True, "disk", hv, c, tuple(verts))
    return ConvexityReport(False, "disk", hv, *(first or (None, ())))

"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

Thresholds are pinned here and nowhere else.
"""

import itertools
import json
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import random_connected, square
from digifix import geometry as geo
from digifix import predict
from digifix.core import DigitalImage
from digifix.corpus import ESSENTIAL_LAW, load
from digifix.verify import (UNKNOWN, VERIFIED, cold_defect, find_fixing_map, fixing_tables,
                            is_freezing, is_minimal, naive_fixing_tables)

FREEZE_SECONDS = 10.0
CORPUS_SECONDS = 300.0
RANDOM_IMAGES = 100
MAX_RANDOM_POINTS = 12
EQUIV_RANDOM_SUBSETS = 50
MIN_ENUM_CASES = 1000
NAIVE_SPACE = 2_000_000  # cap on n^(#X - #A) per naive run
INVARIANCE_PAIRS = 100
SEED = 20240611

pytestmark = pytest.mark.acceptance


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def sq(lo, hi, u):
    return DigitalImage(square(lo, hi), u)


@pytest.mark.criterion(1)
def test_criterion_1_freezing_checks():
    for m in (2, 3):
        c = predict.corner_set(m, m)
        v, dt = timed(is_minimal, c.image, c.set)
        assert v.status == VERIFIED and dt < FREEZE_SECONDS, (m, v.status, dt)
    for name in ("degrees225", "degrees270slant"):
        doc = load(name)
        assert doc.marked == doc.image.pointset - {(2, 2)}
        for u in (1, 2):
            v, dt = timed(is_freezing, doc.image.with_adjacency(u), doc.marked)
            assert v.status == VERIFIED and dt < FREEZE_SECONDS, (name, u, v.status, dt)
    rng = random.Random(SEED)
    t0 = time.perf_counter()
    for _ in range(RANDOM_IMAGES):
        pts = random_connected(rng, rng.randint(1, MAX_RANDOM_POINTS))
        bd = geo.boundary(pts, 1)
        for u in (1, 2):
            v = is_freezing(DigitalImage(pts, u), bd)
            assert v.status == VERIFIED, (pts, u, v.status)
    assert time.perf_counter() - t0 < FREEZE_SECONDS


@pytest.mark.criterion(2)
def test_criterion_2_corner_cold_defects():
    for n in (1, 2):
        corners = [(-n, -n), (-n, n), (n, -n), (n, n)]
        s, v = cold_defect(sq(-n, n, 2), corners)
        assert v.status != UNKNOWN, f"budget exhausted for n={n}, lower bound {s}"
        assert s == n
        s, v = cold_defect(sq(-n, n, 1), corners)
        assert v.status == VERIFIED and s == 0


@pytest.mark.criterion(3)
def test_criterion_3_witness_replication():
    for n in (1, 2, 3):
        X = sq(-n, n, 2)
        corners = [(-n, -n), (-n, n), (n, -n), (n, n)]
        s, v = cold_defect(X, corners)
        assert v.status == VERIFIED and s == n
        f = v.witness
        assert f.is_continuous() and f.fixes(corners) and f.max_displacement() == n
        hits = [p for p in f.argmax_displacement() if p[0] == 0]
        if not hits:
            # the first witness found may peak elsewhere; ask for one at (0, n)
            far = [q for q in X.points if X.distance((0, n), q) == n]
            w = find_fixing_map(X, corners, (0, n), far)
            assert w.status == VERIFIED
            f = w.witness
            assert f.is_continuous() and f.fixes(corners) and f.max_displacement() == n
            hits = [p for p in f.argmax_displacement() if p[0] == 0]
        assert hits, n


@pytest.mark.criterion(4)
def test_criterion_4_essential_point_laws():
    violations, checked = [], 0
    for name in ESSENTIAL_LAW:
        pts = load(name).image.pointset
        for u in (1, 2):
            X = DigitalImage(pts, u)
            rep = predict.essential_cold_points(X, kind="cold")
            for p in rep.points:
                s, v = cold_defect(X, X.pointset - {p})
                checked += 1
                if v.status == UNKNOWN or s < 2:
                    violations.append((name, u, p, s, v.status))
    assert checked > 0 and not violations, violations
    for name in ("degrees90", "degrees135"):
        doc = load(name)
        assert doc.image.adjacency.u == 2
        assert doc.marked == doc.image.pointset - {(0, 0)}
        s, v = cold_defect(doc.image, doc.marked)
        assert v.status == VERIFIED and s == 1, (name, s)


@pytest.mark.criterion(5)
@pytest.mark.parametrize("name", ["rectangle", "degrees90slanted", "octagon"])
def test_criterion_5_cold_iff_freezing_c1(name):
    pts = load(name).image.pointset
    X = DigitalImage(pts, 1)
    assert geo.is_digitally_convex(pts).convex and geo.is_disk(pts) is not None
    pred = predict.convex_disk_c1_set(pts)
    tested = [pred.set - {a} for a in pred.set]
    rng = random.Random(SEED)
    order = sorted(pts)
    for _ in range(EQUIV_RANDOM_SUBSETS):
        tested.append(frozenset(rng.sample(order, rng.randint(1, len(order)))))
    bad = []
    for A in tested:
        s, v = cold_defect(X, A)
        assert v.status == VERIFIED
        if (s <= 1) != (s == 0):
            bad.append((sorted(A), s))
    assert not bad, bad


@pytest.mark.criterion(6)
def test_criterion_6_geometry_table():
    D = load("diamond").image.pointset
    cs = geo.is_disk(D)
    assert cs is not None
    assert geo.boundary(D, 1) == D - {(0, 0)}
    assert not DigitalImage(cs.points, 1).is_connected()

    D = load("2sccBdry").image.pointset
    assert (2, 2) in geo.boundary(D, 2) and (2, 2) not in geo.boundary(D, 1)
    curves = geo.disk_curves(D, minimal=False)
    c1_style = [c for c in curves if geo.is_closed_curve(c, 1)]
    c2_only = [c for c in curves if not geo.is_closed_curve(c, 1)]
    assert c1_style and c2_only
    assert min(map(len, c2_only)) < min(map(len, c1_style))

    D = load("notDisk").image.pointset
    assert geo.is_disk(D) is None
    assert len(geo.jordan_components(geo.boundary(D, 1)).finite) == 2

    def angle(pts, p):
        for c in geo.disk_curves(pts, minimal=True):
            if p in c:
                return geo.interior_angle(pts, c, p)

    a = angle(load("degrees225").image.pointset, (2, 2))
    assert a is not None and a.degrees == 225
    a = angle(load("degrees135").image.pointset, (0, 0))
    assert a is not None and a.degrees == 135 and a.thick


def _window_images():
    cells = [(x, y) for x in range(3) for y in range(3)]
    for k in range(1, 10):
        for pts in itertools.combinations(cells, k):
            for u in (1, 2):
                if DigitalImage(pts, u).is_connected():
                    yield DigitalImage(pts, u)


@pytest.mark.criterion(7)
def test_criterion_7_pruned_equals_naive():
    rng = random.Random(SEED)
    cases = mismatches = 0
    for X in _window_images():
        n = len(X)
        # smallest #A keeping the naive search space affordable
        lo = 0
        while n ** (n - lo) > NAIVE_SPACE:
            lo += 1
        for _ in range(2):
            A = rng.sample(X.points, rng.randint(lo, n))
            pruned = {tuple(r) for r in fixing_tables(X, A, limit=10**6)}
            naive = {tuple(r) for r in naive_fixing_tables(X, A, limit=10**6)}
            cases += 1
            mismatches += pruned != naive
    assert cases >= MIN_ENUM_CASES and mismatches == 0, (cases, mismatches)


def _transform(pts, swap, neg, shift):
    out = []
    for x, y in pts:
        if swap:
            x, y = y, x
        x, y = (-x if neg[0] else x), (-y if neg[1] else y)
        out.append((x + shift[0], y + shift[1]))
    return out


@pytest.mark.criterion(8)
def test_criterion_8_isomorphism_invariance():
    rng = random.Random(SEED)
    for _ in range(INVARIANCE_PAIRS):
        pts = random_connected(rng, rng.randint(2, 10))
        A = rng.sample(pts, rng.randint(1, len(pts)))
        u = rng.choice((1, 2))
        s0, v0 = cold_defect(DigitalImage(pts, u), A)
        assert v0.status == VERIFIED
        for swap, nx, ny in itertools.product((False, True), repeat=3):
            shift = (rng.randint(-20, 20), rng.randint(-20, 20))
            F = lambda q: _transform(q, swap, (nx, ny), shift)  # noqa: E731
            s, v = cold_defect(DigitalImage(F(pts), u), F(A))
            assert v.status == VERIFIED and s == s0, (pts, A, u, swap, nx, ny, shift)


@pytest.mark.criterion(9)
def test_criterion_9_corpus_cli():
    t0 = time.perf_counter()
    cp = subprocess.run([sys.executable, "-m", "digifix.cli", "corpus", "--json"],
                        capture_output=True, text=True, cwd="/")
    elapsed = time.perf_counter() - t0
    assert cp.returncode == 0, cp.stdout + cp.stderr
    data = json.loads(cp.stdout)
    statuses = {c["name"]: c["status"] for c in data["cases"]}
    assert len(statuses) == 16 and set(statuses.values()) == {"PASS"}, statuses
    assert elapsed < CORPUS_SECONDS

import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from digifix.core import DigitalImage, ImageError, box
from digifix.maps import SelfMap
from digifix.verify import (REFUTED, UNKNOWN, VERIFIED, EnumerationLimit, FixingProblem,
                            cold_defect, enumerate_fixing_maps, find_fixing_map, fixing_tables,
                            is_freezing, is_minimal, is_s_cold, naive_fixing_tables, propagate)

from conftest import random_connected, square


def corners(n):
    return {(-n, -n), (-n, n), (n, -n), (n, n)}


def table_set(tables):
    return {tuple(r) for r in np.asarray(tables).tolist()}


def test_bfs_matches_scipy_shortest_path(rng):
    for _ in range(20):
        pts = random_connected(rng, rng.randint(2, 14))
        for u in (1, 2):
            X = DigitalImage(pts, u)
            ref = shortest_path(csr_matrix(X.adjacency_matrix.astype(float)), unweighted=True)
            ref = np.where(np.isinf(ref), -1, ref).astype(int)
            assert np.array_equal(X.distance_matrix, ref)


def test_corners_freeze_square_under_c1():
    X = DigitalImage(square(0, 2), 1)
    v = is_freezing(X, {(0, 0), (0, 2), (2, 0), (2, 2)})
    assert v.status == VERIFIED and v.witness is None


def test_corners_do_not_freeze_square_under_c2():
    X = DigitalImage(square(0, 2), 2)
    v = is_freezing(X, {(0, 0), (0, 2), (2, 0), (2, 2)})
    assert v.status == REFUTED
    f = v.witness
    assert f.is_continuous() and f.fixes([(0, 0), (2, 2)]) and not f.is_identity()


def test_whole_image_is_freezing_and_empty_set_is_not():
    X = DigitalImage(square(0, 1), 1)
    assert is_freezing(X, X.points).verified
    assert is_freezing(X, []).refuted


def test_a_must_be_a_subset():
    X = DigitalImage(square(0, 1), 1)
    with pytest.raises(ImageError):
        is_freezing(X, [(9, 9)])


def test_cold_inputs_validated():
    X = DigitalImage([(0, 0), (3, 0)], 1)
    with pytest.raises(ImageError):
        cold_defect(X, [(0, 0)])
    with pytest.raises(ImageError):
        cold_defect(DigitalImage(square(0, 1), 1), [])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_square_corner_defects(n):
    X = DigitalImage(square(-n, n), 2)
    s, v = cold_defect(X, corners(n))
    assert (s, v.status) == (n, VERIFIED)
    assert v.witness.is_continuous() and v.witness.fixes(corners(n))
    assert v.witness.max_displacement() == n
    assert is_s_cold(X, corners(n), n).verified
    assert is_s_cold(X, corners(n), n - 1).refuted
    assert cold_defect(X.with_adjacency(1), corners(n))[0] == 0


def test_path_end_moves_two():
    X = DigitalImage([(i, 0) for i in range(4)], 1)
    s, v = cold_defect(X, [(1, 0), (2, 0), (3, 0)])
    assert s == 2 and v.witness((0, 0)) == (2, 0)


def test_budget_exhaustion_reports_unknown():
    X = DigitalImage(square(-2, 2), 2)
    s, v = cold_defect(X, {(-2, -2)}, budget=1)
    assert v.status == UNKNOWN and v.budget_exhausted
    lo, hi = v.details["bounds"]
    assert lo <= hi
    assert is_freezing(DigitalImage(square(0, 3), 2), {(0, 0)}, budget=1).status in (UNKNOWN, REFUTED)


def test_find_fixing_map():
    X = DigitalImage(square(0, 2), 2)
    A = X.pointset - {(0, 0)}
    assert find_fixing_map(X, A, (0, 0), [(1, 1)]).verified
    assert find_fixing_map(X, A, (0, 0), [(2, 2)]).refuted


def test_minimality():
    X = DigitalImage(square(0, 3), 1)
    A = {(0, 0), (0, 3), (3, 0), (3, 3)}
    v = is_minimal(X, A)
    assert v.verified
    assert set(v.details["deletions"]) == A
    for a, f in v.details["deletions"].items():
        assert f.is_continuous() and f.fixes(A - {a}) and not f.is_identity()
    extra = is_minimal(X, A | {(1, 0)})
    assert extra.refuted and extra.details["removable"] in A | {(1, 0)}
    with pytest.raises(ImageError):
        is_minimal(X, {(0, 0)})


def test_minimal_cold():
    X = DigitalImage(square(0, 2), 2)
    v = is_minimal(X, X.pointset - {(0, 0)}, "cold:1")
    assert v.refuted


def test_enumeration_limit():
    X = DigitalImage(square(0, 2), 2)
    with pytest.raises(EnumerationLimit):
        fixing_tables(X, [], limit=10)
    maps = list(enumerate_fixing_maps(X, X.pointset - {(1, 1)}))
    assert all(isinstance(f, SelfMap) and f.is_continuous() for f in maps)


def test_each_rule_preserves_the_solution_set(rng):
    for _ in range(40):
        pts = random_connected(rng, rng.randint(3, 7))
        u = rng.choice([1, 2])
        X = DigitalImage(pts, u)
        A = rng.sample(pts, rng.randint(1, len(pts) - 1))
        ref = table_set(fixing_tables(X, A, arc_consistency=False, pulling_lemma=False,
                                      unique_path=False, limit=10**6))
        for rules in ({"arc_consistency": False}, {"pulling_lemma": False},
                      {"unique_path": False}, {}):
            assert table_set(fixing_tables(X, A, limit=10**6, **rules)) == ref


def test_pruned_equals_naive_small(rng):
    for _ in range(30):
        pts = random_connected(rng, rng.randint(2, 6))
        X = DigitalImage(pts, rng.choice([1, 2]))
        A = rng.sample(pts, rng.randint(0, len(pts)))
        assert table_set(fixing_tables(X, A, limit=10**6)) == table_set(naive_fixing_tables(X, A))


def test_propagation_only_removes_values():
    X = DigitalImage(square(0, 2), 2)
    P = FixingProblem.create(X, {(0, 0), (2, 2)})
    Q = propagate(P)
    assert not (Q.domains & ~P.domains).any()
    assert Q.domain((1, 1)) == {(1, 1)}  # on the unique diagonal between fixed points


def test_numpy_backend_gives_identical_results():
    script = r"""
import json
from digifix import kernels
from digifix.core import DigitalImage
from digifix.verify import cold_defect, is_freezing
pts = [(x, y) for x in range(-2, 3) for y in range(-2, 3)]
A = [(-2, -2), (-2, 2), (2, -2), (2, 2)]
out = {"backend": kernels.BACKEND}
s, v = cold_defect(DigitalImage(pts, 2), A)
out["c2"] = [s, v.nodes_explored, v.witness.table.tolist()]
v = is_freezing(DigitalImage(pts, 1), A)
out["c1"] = [v.status, v.nodes_explored]
print(json.dumps(out))
"""
    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, DIGIFIX_BACKEND=backend)
        cp = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True,
                            text=True, check=True)
        results[backend] = json.loads(cp.stdout)
    assert results["numpy"]["backend"] == "numpy"
    assert results["numba"]["backend"] == "numba"
    assert results["numba"]["c2"] == results["numpy"]["c2"]
    assert results["numba"]["c1"] == results["numpy"]["c1"]


def test_budget_env_var():
    env = dict(os.environ, DIGIFIX_BUDGET="123")
    cp = subprocess.run([sys.executable, "-c", "from digifix.verify import DEFAULT_BUDGET; print(DEFAULT_BUDGET)"],
                        env=env, capture_output=True, text=True, check=True)
    assert cp.stdout.strip() == "123"


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(seed=st.integers(min_value=0, max_value=10**9), u=st.sampled_from([1, 2]),
       size=st.integers(min_value=2, max_value=10))
def test_defect_witness_is_sound_and_tight(seed, u, size):
    import random
    r = random.Random(seed)
    pts = random_connected(r, size)
    X = DigitalImage(pts, u)
    A = r.sample(pts, r.randint(1, len(pts)))
    s, v = cold_defect(X, A)
    assert v.status == VERIFIED
    f = v.witness
    assert f.is_continuous() and f.fixes(A)
    assert f.max_displacement() == s
    assert is_s_cold(X, A, s).verified
    if s > 0:
        assert is_s_cold(X, A, s - 1).refuted
    assert is_freezing(X, A).verified == (s == 0)

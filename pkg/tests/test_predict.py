import pytest

from digifix import predict
from digifix.core import DigitalImage, ImageError
from digifix.verify import cold_defect, is_freezing, is_minimal, is_s_cold


def rect(x0, x1, y0, y1):
    return {(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)}


BIG_DIAMOND = {(x, y) for x in range(-2, 3) for y in range(-2, 3) if abs(x) + abs(y) <= 2}
OCTAGON = rect(0, 4, 0, 4) - {(0, 0), (0, 4), (4, 0), (4, 4)}


def test_corner_set():
    p = predict.corner_set(3, 3)
    assert p.set == {(0, 0), (0, 3), (3, 0), (3, 3)}
    assert p.claim == predict.MINIMAL_FREEZING and p.adjacency == "c1"
    assert predict.corner_set(1).set == {(0,), (1,)}
    cube = predict.corner_set(2, 2, 2)
    assert len(cube.set) == 8 and cube.claim == predict.FREEZING
    assert is_freezing(cube.image, cube.set).verified
    with pytest.raises(ImageError):
        predict.corner_set(0, 2)


def test_bd1_prediction():
    p = predict.bd1_prediction(DigitalImage(rect(0, 2, 0, 2), 2))
    assert p.claim == predict.MINIMAL_FREEZING and len(p.set) == 8
    assert is_minimal(p.image, p.set).verified
    q = predict.bd1_prediction(DigitalImage(rect(0, 2, 0, 2), 1))
    assert q.claim == predict.FREEZING
    assert predict.bd1_prediction(DigitalImage([(5, 5)], 1)).set == {(5, 5)}
    d = {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
    assert predict.bd1_prediction(DigitalImage(d, 1)).set == d - {(0, 0)}


@pytest.mark.parametrize("pts, c1_size, c2_size", [
    (rect(0, 3, 0, 2), 4, 10),
    (BIG_DIAMOND, 8, 4),
    (OCTAGON, 8, 12),
])
def test_convex_disk_sets_are_minimal_freezing(pts, c1_size, c2_size):
    for f, size in ((predict.convex_disk_c1_set, c1_size), (predict.convex_disk_c2_set, c2_size)):
        p = f(pts)
        assert len(p.set) == size
        assert is_minimal(p.image, p.set).verified


def test_convex_disk_set_rejects_nonconvex():
    with pytest.raises(ImageError):
        predict.convex_disk_c1_set(rect(0, 2, 0, 2) | rect(2, 4, 0, 3))


def test_union_rectangles_c2_set_matches_listed_b():
    # the construction needs a convex disk; here we just check the listed B freezes
    X = DigitalImage(rect(0, 2, 0, 2) | rect(2, 4, 0, 3), 2)
    B = {(0, i) for i in range(3)} | {(j, 0) for j in range(5)} | {(4, k) for k in range(4)}
    B |= {(1, 2), (2, 3), (3, 3)}
    assert is_freezing(X, B).verified


def test_axis_parallel_rule():
    X = rect(0, 3, 0, 2)
    S = ((0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (3, 2), (3, 1), (3, 0), (2, 0), (1, 0))
    alternating = set(S[::2])
    assert predict.axis_parallel_cold_set_valid(X, S, alternating)
    assert predict.axis_parallel_cold_set_valid(X, S, set(S))
    assert not predict.axis_parallel_cold_set_valid(X, S, set(S) - {(1, 2), (2, 2)})
    assert is_s_cold(DigitalImage(X, 2), alternating, 1).verified
    with pytest.raises(ImageError):
        predict.axis_parallel_cold_set_valid(BIG_DIAMOND, ((0, 2), (1, 1), (2, 0), (1, -1)), [])


def test_n_cold_corner_prediction():
    c2, c1 = predict.n_cold_corner_prediction(2)
    assert c2.s == 2 and c2.adjacency == "c2" and c1.adjacency == "c1"
    assert cold_defect(c2.image, c2.set)[0] == 2
    with pytest.raises(ImageError):
        predict.n_cold_corner_prediction(0)


def test_essential_points_square():
    sq = rect(0, 2, 0, 2)
    c1 = predict.essential_cold_points(sq, 1, "cold")
    assert {(0, 0), (0, 2), (2, 0), (2, 2)} <= c1.set
    assert "90-axis-c1" in c1.points[(0, 0)]
    c2 = predict.essential_cold_points(sq, 2, "cold")
    assert (0, 0) not in c2


def test_essential_points_path():
    rep = predict.essential_cold_points([(i, 0) for i in range(4)], 1)
    assert rep.tagged("single-neighbor") == {(0, 0), (3, 0)}


def test_freezing_kind_adds_135_vertices():
    X = {(0, 0), (1, 0), (2, 0), (-1, 1), (0, 1), (1, 1), (-2, 2), (-1, 2), (0, 2)}
    cold = predict.essential_cold_points(X, 2, "cold")
    freeze = predict.essential_cold_points(X, 2, "freezing")
    assert (0, 0) not in cold and (0, 0) in freeze
    assert cold.set <= freeze.set


def test_witnesses_move_only_the_essential_point():
    for pts in (rect(0, 3, 0, 2), BIG_DIAMOND, OCTAGON):
        for u in (1, 2):
            rep = predict.essential_cold_points(pts, u)
            for (p, tag), f in rep.witnesses.items():
                assert f.is_continuous()
                assert {q for q in f.image.points if f(q) != q} == {p}


def test_disconnected_input_gives_empty_report():
    rep = predict.essential_cold_points([(0, 0), (5, 5)], 1)
    assert not rep.points and rep.diagnostics


def test_subset_law_on_small_disks():
    # every certified 1-cold set contains the essential points
    import itertools
    for pts in (rect(0, 2, 0, 2), {(0, 0), (1, 0), (2, 0), (-1, 1), (0, 1), (1, 1)}):
        for u in (1, 2):
            X = DigitalImage(pts, u)
            ess = predict.essential_cold_points(X).set
            for k in range(1, 4):
                for A in itertools.combinations(X.points, k):
                    if is_s_cold(X, A, 1).verified:
                        assert ess <= set(A)

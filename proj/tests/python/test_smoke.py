import numpy as np
import pytest

import cornerforge as cf


@pytest.fixture(scope="module")
def fast9():
    return cf.Tree.learn(9)


def test_square_has_four_corners(fast9):
    img = cf.test_square(64, 30, 255, 0)
    kps = cf.detect_keypoints(img, fast9, 30)
    assert kps.shape == (4, 3)
    assert set(kps[:, 0].astype(int)) <= set(range(14, 20)) | set(range(43, 49))


def test_tree_matches_segment_test(fast9):
    img = cf.synthetic_scene(120, 90, seed=3)
    for t in (10, 35):
        np.testing.assert_array_equal(cf.detect(img, fast9, t), cf.segment_test(img, 9, t))


def test_tree_round_trip(fast9):
    assert cf.Tree.loads(fast9.dumps()) == fast9
    assert "fast_tree_corner" in fast9.emit_source()


def test_constant_image_is_empty(fast9):
    img = np.full((40, 50), 90, dtype=np.uint8)
    assert cf.detect(img, fast9, 1).shape == (0, 2)
    with pytest.raises(cf.NotACornerError):
        cf.corner_score(img, fast9, 20, 20)


def test_detectors_and_responses():
    img = cf.synthetic_scene(100, 80, seed=5)
    assert cf.harris_response(img).shape == (80, 100)
    assert cf.shi_tomasi_response(img).min() >= -1e-9
    for algo in ("fast-ref", "fast-tree", "harris", "shi-tomasi", "random"):
        kps = cf.run_detector(img, algo, count=50)
        assert kps.shape[1] == 3 and 0 < len(kps) <= 80, algo
    with pytest.raises(ValueError):
        cf.run_detector(img, "nosuch")


def test_repeatability_identity():
    pts = np.array([[10, 10], [20, 30], [40, 5]], dtype=float)
    assert cf.pair_repeatability(pts, pts, np.eye(3), 50, 50) == (3, 3)


def test_cost_and_schedule():
    assert cf.faster_cost(1.0, [3500.0], 10000) == pytest.approx(8.0)
    assert cf.anneal_temperature(0, 5000) == pytest.approx(100.0)


def test_pgm_round_trip(tmp_path):
    img = cf.synthetic_scene(33, 21, seed=2)
    path = str(tmp_path / "a.pgm")
    cf.write_pgm(path, img)
    np.testing.assert_array_equal(cf.read_pgm(path), img)
    with pytest.raises(OSError):
        cf.read_pgm(str(tmp_path / "missing.pgm"))

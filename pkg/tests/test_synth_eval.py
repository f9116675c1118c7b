import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from socialfov.errors import ConfigError, InvalidEstimate, NoSharedJoints, NonRigidExtrinsics
from socialfov.evaluate import (
    angular_error,
    apply_extrinsics,
    evaluate,
    heading_error,
    mpjpe,
    overlay_frames,
    time_align,
)
from socialfov.geometry import camera_to_social
from socialfov.orientation import DirectionEstimate, Kind
from socialfov.pipeline import Pipeline
from socialfov.skeleton import JointId as J, Skeleton3D
from socialfov.synth import TRAJECTORIES, NoiseModel, SyntheticScenario, generate


def run(scenario, k=None):
    # full resolution: the fixed 8 px joint disks crowd each other in small images
    rec, gt = generate(scenario, k)
    return list(Pipeline(rec.intrinsics).run(rec)), rec, gt


def test_scenario_validation():
    with pytest.raises(ConfigError, match="walk_straight"):
        SyntheticScenario(trajectory="moonwalk")
    with pytest.raises(ConfigError):
        SyntheticScenario.from_dict({"speed": 3})
    with pytest.raises(ConfigError):
        NoiseModel(dropout=1.5)
    s = SyntheticScenario(seed=4, noise=NoiseModel(1.0, 2.0, 0.1))
    assert SyntheticScenario.from_dict(s.to_dict()) == s


@pytest.mark.parametrize("trajectory", TRAJECTORIES)
def test_noiseless_end_to_end(trajectory):
    results, rec, gt = run(SyntheticScenario(duration=6.0, trajectory=trajectory))
    rep = evaluate(results, gt)
    assert rep.matched > 150
    assert rep.mpjpe_mean < 0.002
    assert rep.torso_raw["mean"] < math.radians(0.5)
    assert rep.gaze_raw["count"] > 100 and rep.gaze_raw["mean"] < math.radians(0.5)
    assert {r["track_id"] for r in results} == {0}


def test_full_dropout_gives_no_tracks(small_k):
    sc = SyntheticScenario(duration=1.0, noise=NoiseModel(dropout=1.0))
    results, rec, _ = run(sc, small_k)
    assert results == []
    assert any(len(f.detections) for f in rec)


def test_generator_is_deterministic(small_k):
    sc = SyntheticScenario(seed=9, duration=1.0, trajectory="sudden_dodge", noise=NoiseModel(2, 15, 0.1))
    (a, ga), (b, gb) = generate(sc, small_k), generate(sc, small_k)
    for fa, fb in zip(a, b):
        assert fa.detections == fb.detections
        assert fa.load_depth().data.tobytes() == fb.load_depth().data.tobytes()
    assert all(np.array_equal(ea.joints[j], eb.joints[j])
               for ea, eb in zip(ga.entries, gb.entries) for j in ea.joints)


def test_time_align_examples():
    gt = [i / 10 for i in range(30)]  # sparse enough that a shift cannot reach the next entry
    a = time_align(gt, gt)
    assert len(a.pairs) == 30 and not a.unmatched_gt
    assert len(time_align([t + 0.010 for t in gt], gt).pairs) == 30
    assert len(time_align([t + 0.020 for t in gt], gt).pairs) == 0
    assert time_align([0.0, 0.001], [0.0005], tolerance=0.001).pairs == [(0, 0)]
    assert len(time_align([0.0, 0.001], [0.0, 0.001], tolerance=0.0).pairs) == 2


@settings(max_examples=50)
@given(st.lists(st.floats(0, 2), max_size=20), st.lists(st.floats(0, 2), max_size=20))
def test_time_align_one_to_one(r, g):
    g = sorted(g)
    a = time_align(r, g, 0.05)
    assert len({gi for _, gi in a.pairs}) == len(a.pairs)
    assert len({ri for ri, _ in a.pairs}) == len(a.pairs)
    assert all(abs(r[ri] - g[gi]) <= 0.05 for ri, gi in a.pairs)


def rigid(rng):
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    m = np.eye(4)
    m[:3, :3], m[:3, 3] = q, rng.normal(size=3)
    return m


def test_apply_extrinsics():
    p = np.array([[0.5, 1.0, 2.0]])
    np.testing.assert_array_equal(apply_extrinsics(p, np.eye(4)), camera_to_social(p))
    m = np.eye(4)
    m[:3, 3] = [1, 0, 0]
    np.testing.assert_allclose(apply_extrinsics(p + [1, 0, 0], m), camera_to_social(p), atol=1e-15)
    rng = np.random.default_rng(0)
    for _ in range(20):
        pts = rng.normal(size=(6, 3))
        out = apply_extrinsics(pts, rigid(rng))
        for i in range(6):
            for j in range(6):
                assert abs(np.linalg.norm(out[i] - out[j]) - np.linalg.norm(pts[i] - pts[j])) < 1e-9
    bad = np.eye(4)
    bad[0, 0] = -1
    with pytest.raises(NonRigidExtrinsics):
        apply_extrinsics(p, bad)


def test_mpjpe():
    a = Skeleton3D({J.NOSE: [1, 2, 3], J.HIP_L: [0, 0, 0], J.HIP_R: [0, 1, 0]})
    assert mpjpe(a, a) == 0
    b = a.transformed(lambda p: p + [0.1, 0, 0])
    assert mpjpe(a, b) == pytest.approx(0.1)
    rng = np.random.default_rng(1)
    names = [J.NOSE, J.ELBOW_L, J.KNEE_R]
    x = {j: rng.normal(size=3) for j in names}
    y = {j: rng.normal(size=3) for j in names[:2] + [J.ANKLE_L]}
    hand = sum(math.dist(x[j], y[j]) for j in names[:2]) / 2
    assert mpjpe(Skeleton3D(x), Skeleton3D(y)) == pytest.approx(hand, abs=1e-12)
    with pytest.raises(NoSharedJoints):
        mpjpe(Skeleton3D({J.NOSE: [0, 0, 0]}), Skeleton3D({J.EYE_L: [0, 0, 0]}))


def test_heading_errors():
    assert heading_error(1.0, 1.0) == 0
    assert heading_error(math.pi, -math.pi) == 0
    assert heading_error(0.1, -0.1) == pytest.approx(0.2)
    with pytest.raises(InvalidEstimate):
        angular_error(DirectionEstimate.invalid(Kind.GAZE), 0.0)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_heading_error_symmetric(a, b):
    assert heading_error(a, b) == pytest.approx(heading_error(b, a), abs=1e-12)
    assert 0 <= heading_error(a, b) <= math.pi


def test_overlay_colors():
    results, _, _ = run(SyntheticScenario(duration=0.5))
    ov = overlay_frames(results)
    colors = {a["kind"]: a["color"] for f in ov for a in f["arrows"]}
    assert colors.get("torso") == "green"
    assert colors.get("gaze") == "red"


def test_empty_results_report(small_k):
    _, _, gt = run(SyntheticScenario(duration=0.3), small_k)
    rep = evaluate([], gt)
    assert rep.matched == 0 and rep.mpjpe_mean is None and rep.unmatched_gt == len(gt.entries)
    assert "matched frames" in rep.table()

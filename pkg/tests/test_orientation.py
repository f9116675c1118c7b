import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from socialfov.errors import DegenerateDirection, MissingJoints
from socialfov.geometry import UnitQuaternion, wrap_angle
from socialfov.orientation import (
    estimate_orientation,
    gaze_normal,
    ground_direction,
    heading_quaternion,
    torso_normal,
)
from socialfov.skeleton import JointId as J, Skeleton3D

from conftest import facing_camera_joints
from oracles import cross, quat_rotate

coord = st.floats(-3, 3, allow_nan=False)
point = st.tuples(coord, coord, coord).map(np.array)


def rot_z(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def test_torso_normal_facing_camera(facing_skeleton):
    np.testing.assert_allclose(torso_normal(facing_skeleton), [-0.16, 0, 0], atol=1e-15)


def test_gaze_normal_facing_camera():
    s = Skeleton3D({J.EYE_L: [1.95, -0.03, 1.6], J.EYE_R: [1.95, 0.03, 1.6],
                    J.SHOULDER_L: [2, -0.2, 1.4], J.SHOULDER_R: [2, 0.2, 1.4]})
    n = gaze_normal(s)
    np.testing.assert_allclose(n, cross((-0.05, -0.03, 0.2), (-0.05, 0.03, 0.2)), atol=1e-15)
    assert n[0] < 0


def test_degenerate_normals_are_zero():
    j = facing_camera_joints()
    j[J.SHOULDER_R] = j[J.SHOULDER_L]
    np.testing.assert_array_equal(torso_normal(Skeleton3D(j)), [0, 0, 0])
    j = facing_camera_joints()
    j[J.EYE_R] = j[J.EYE_L]
    np.testing.assert_array_equal(gaze_normal(Skeleton3D(j)), [0, 0, 0])


def test_missing_joints():
    with pytest.raises(MissingJoints) as e:
        torso_normal(Skeleton3D({J.SHOULDER_L: [1, 0, 0]}))
    assert "pelvis" in e.value.missing


@given(point, point, point)
def test_normal_orthogonal_to_edges(a, b, c):
    s = Skeleton3D({J.SHOULDER_L: a, J.SHOULDER_R: b, J.HIP_L: c, J.HIP_R: c})
    n = torso_normal(s)
    np.testing.assert_allclose(n, cross(a - c, b - c), atol=1e-12)
    assert abs(n @ (a - c)) <= 1e-12 * max(1.0, np.linalg.norm(n) * np.linalg.norm(a - c))
    assert abs(n @ (b - c)) <= 1e-12 * max(1.0, np.linalg.norm(n) * np.linalg.norm(b - c))


@given(point, point, point)
def test_mirror_flips_gaze_y(a, b, c):
    mirror = np.array([1.0, -1.0, 1.0])
    # mirroring swaps anatomical sides, so the mirrored eyes are relabeled
    s = Skeleton3D({J.EYE_L: a, J.EYE_R: b, J.SHOULDER_L: c, J.SHOULDER_R: c})
    m = Skeleton3D({J.EYE_L: b * mirror, J.EYE_R: a * mirror, J.SHOULDER_L: c * mirror, J.SHOULDER_R: c * mirror})
    n, nm = gaze_normal(s), gaze_normal(m)
    np.testing.assert_allclose(nm, n * mirror, atol=1e-12)


@pytest.mark.parametrize(
    "n, d", [((-0.16, 0, 0), (-1, 0, 0)), ((0.3, 0.4, 5.0), (0.6, 0.8, 0.0))]
)
def test_ground_direction(n, d):
    np.testing.assert_allclose(ground_direction(n), d, atol=1e-15)


def test_vertical_normal_is_degenerate():
    with pytest.raises(DegenerateDirection):
        ground_direction((0, 0, 1))
    with pytest.raises(DegenerateDirection):
        ground_direction((5e-7, 0, 1))


@pytest.mark.parametrize(
    "d, q",
    [((1, 0, 0), (1, 0, 0, 0)), ((-1, 0, 0), (0, 0, 0, 1)),
     ((0, 1, 0), (math.sqrt(0.5), 0, 0, math.sqrt(0.5)))],
)
def test_heading_quaternion(d, q):
    uq = heading_quaternion(d)
    np.testing.assert_allclose(uq.as_array(), q, atol=1e-15)
    np.testing.assert_allclose(quat_rotate(q, (1, 0, 0)), d, atol=1e-15)


def test_facing_camera_headings(facing_skeleton):
    torso, gaze = estimate_orientation(facing_skeleton)
    assert torso.valid and gaze.valid
    assert torso.heading == pytest.approx(math.pi, abs=1e-9)
    assert gaze.heading == pytest.approx(math.pi, abs=1e-9)


def test_missing_eyes_invalidates_gaze_only():
    j = facing_camera_joints()
    del j[J.EYE_L], j[J.EYE_R]
    torso, gaze = estimate_orientation(Skeleton3D(j))
    assert torso.valid and not gaze.valid


def test_quarter_turn_shifts_heading():
    R = rot_z(math.pi / 2)
    s = Skeleton3D({j: R @ p for j, p in facing_camera_joints().items()})
    torso, gaze = estimate_orientation(s)
    assert torso.heading == pytest.approx(wrap_angle(math.pi + math.pi / 2), abs=1e-9)
    assert gaze.heading == pytest.approx(-math.pi / 2, abs=1e-9)


@given(st.floats(-4, 4), point)
def test_equivariance_and_translation(phi, t):
    base = Skeleton3D(facing_camera_joints())
    b_t, b_g = estimate_orientation(base)
    rotated = base.transformed(lambda p: rot_z(phi) @ p)
    r_t, r_g = estimate_orientation(rotated)
    for b, r in ((b_t, r_t), (b_g, r_g)):
        assert abs(wrap_angle(r.heading - b.heading - phi)) < 1e-9
    moved = base.transformed(lambda p: p + t)
    m_t, _ = estimate_orientation(moved)
    np.testing.assert_allclose(m_t.raw_normal, b_t.raw_normal, atol=1e-12)
    np.testing.assert_allclose(m_t.direction, b_t.direction, atol=1e-12)
    np.testing.assert_allclose(m_t.quaternion.as_array(), b_t.quaternion.as_array(), atol=1e-12)


@given(st.floats(0.1, 10))
def test_scale_covariance(s):
    base = Skeleton3D(facing_camera_joints())
    pelvis = base.pelvis
    scaled = base.transformed(lambda p: pelvis + s * (p - pelvis))
    b, sc = estimate_orientation(base)[0], estimate_orientation(scaled)[0]
    np.testing.assert_allclose(sc.raw_normal, s * s * b.raw_normal, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(sc.direction, b.direction, atol=1e-12)


@given(point, point, point, point, point)
def test_valid_estimates_satisfy_contract(a, b, c, d, e):
    s = Skeleton3D({J.SHOULDER_L: a, J.SHOULDER_R: b, J.HIP_L: c, J.HIP_R: c, J.EYE_L: d, J.EYE_R: e})
    for est in estimate_orientation(s):
        if not est.valid:
            continue
        assert abs(np.linalg.norm(est.direction) - 1) < 1e-9 and est.direction[2] == 0
        assert est.heading == wrap_angle(math.atan2(est.direction[1], est.direction[0]))
        assert -math.pi < est.heading <= math.pi
        np.testing.assert_allclose(est.quaternion.rotate([1, 0, 0]), est.direction, atol=1e-9)
        assert isinstance(est.quaternion, UnitQuaternion)

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from socialfov.errors import BehindCamera, NonPositiveDepth, OutOfBounds
from socialfov.geometry import (
    CameraIntrinsics,
    FrameConvention,
    UnitQuaternion,
    backproject,
    camera_to_social,
    project,
    social_to_camera,
    wrap_angle,
)

from oracles import pinhole_backproject, quat_rotate

K600 = CameraIntrinsics(600.0, 600.0, 640.0, 360.0)
KDEF = CameraIntrinsics.default()

finite = st.floats(-10, 10, allow_nan=False)
vec3 = st.tuples(finite, finite, finite)


def test_principal_point_ray():
    np.testing.assert_array_equal(backproject(640, 360, 2000, K600), [0.0, 0.0, 2.0])


def test_45_degree_ray():
    np.testing.assert_allclose(backproject(640 + 600, 360, 1000, K600), [1.0, 0.0, 1.0], atol=1e-15)


def test_backproject_matches_hand_pinhole():
    expect = pinhole_backproject(700, 400, 1530, 911.5, 911.5, 640, 360)
    np.testing.assert_allclose(backproject(700, 400, 1530, KDEF), expect, rtol=0, atol=1e-15)
    # 60 px at 1.53 m with f = 911.5
    assert expect[0] == pytest.approx(60 * 1.53 / 911.5, abs=1e-15)


def test_project_principal_point():
    assert project([0, 0, 2.0], KDEF) == (640.0, 360.0, 2000.0)


def test_backproject_errors():
    with pytest.raises(NonPositiveDepth):
        backproject(10, 10, 0, KDEF)
    with pytest.raises(OutOfBounds):
        backproject(1280, 10, 1000, KDEF)
    with pytest.raises(OutOfBounds):
        backproject(-0.5, 10, 1000, KDEF)
    with pytest.raises(BehindCamera):
        project([0, 0, -1], KDEF)


@pytest.mark.parametrize(
    "kw",
    [dict(fx=0, fy=1, cx=1, cy=1), dict(fx=1, fy=1, cx=0, cy=1), dict(fx=1, fy=1, cx=1, cy=720)],
)
def test_intrinsics_invariants(kw):
    with pytest.raises(ValueError):
        CameraIntrinsics(**kw)


def test_intrinsics_dict_round_trip():
    assert CameraIntrinsics.from_dict(KDEF.to_dict()) == KDEF
    with pytest.raises(KeyError):
        CameraIntrinsics.from_dict({"fx": 1})


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 8))
def test_point_round_trip(x, y, z):
    p = np.array([x, y, z])
    u, v, d = project(p, KDEF)
    if not KDEF.contains(u, v):
        return
    np.testing.assert_allclose(backproject(u, v, d, KDEF), p, rtol=0, atol=1e-9)


@given(st.floats(0, 1279), st.floats(0, 719), st.floats(300, 8000))
def test_pixel_round_trip(u, v, d):
    uu, vv, dd = project(backproject(u, v, d, KDEF), KDEF)
    assert abs(uu - u) < 1e-9 and abs(vv - v) < 1e-9 and abs(dd - d) < 1e-9


@pytest.mark.parametrize(
    "cam, social",
    [((0, 0, 2), (2, 0, 0)), ((1, 0, 0), (0, -1, 0)), ((0, -1, 0), (0, 0, 1))],
)
def test_camera_to_social_examples(cam, social):
    np.testing.assert_array_equal(camera_to_social(cam), social)


def test_camera_basis_maps_exactly():
    np.testing.assert_array_equal(camera_to_social(np.array([[0, 0, 1], [-1, 0, 0], [0, -1, 0]])), np.eye(3))


@given(vec3, vec3)
def test_camera_to_social_isometry(a, b):
    a, b = np.array(a), np.array(b)
    d0 = np.linalg.norm(a - b)
    assert abs(np.linalg.norm(camera_to_social(a) - camera_to_social(b)) - d0) <= 1e-12


@given(vec3, st.tuples(*[st.floats(-1, 1)] * 4).filter(lambda q: sum(c * c for c in q) > 1e-3))
def test_leveling_round_trip(p, q):
    conv = FrameConvention(UnitQuaternion.normalized(*q))
    s = camera_to_social(p, conv)
    np.testing.assert_allclose(social_to_camera(s, conv), p, atol=1e-9)
    np.testing.assert_allclose(conv.matrix() @ np.array(p), s, atol=1e-9)


def test_quaternion_norm_check():
    with pytest.raises(ValueError):
        UnitQuaternion(1.0, 0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        UnitQuaternion.normalized(0, 0, 0, 0)


@given(st.tuples(*[st.floats(-1, 1)] * 4).filter(lambda q: sum(c * c for c in q) > 1e-3), vec3)
def test_quaternion_rotate_matches_hamilton(q, v):
    uq = UnitQuaternion.normalized(*q)
    expect = quat_rotate(tuple(uq.as_array()), v)
    np.testing.assert_allclose(uq.rotate(v), expect, atol=1e-9)
    np.testing.assert_allclose(uq.as_matrix() @ np.array(v), expect, atol=1e-9)


@given(st.floats(-100, 100))
def test_wrap_angle_range(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert abs(math.remainder(w - a, 2 * math.pi)) < 1e-9


def test_wrap_angle_seam():
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(3.5) == pytest.approx(3.5 - 2 * math.pi, abs=1e-15)

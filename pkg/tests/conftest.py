import numpy as np
import pytest

from socialfov.geometry import CameraIntrinsics
from socialfov.skeleton import JointId as J, Skeleton3D


def facing_camera_joints(x=2.0):
    """A subject standing at distance ``x`` looking back at the camera."""
    return {
        J.SHOULDER_L: np.array([x, -0.2, 1.4]),
        J.SHOULDER_R: np.array([x, 0.2, 1.4]),
        J.HIP_L: np.array([x, -0.1, 1.0]),
        J.HIP_R: np.array([x, 0.1, 1.0]),
        J.EYE_L: np.array([x - 0.05, -0.03, 1.6]),
        J.EYE_R: np.array([x - 0.05, 0.03, 1.6]),
        J.NOSE: np.array([x - 0.1, 0.0, 1.55]),
    }


@pytest.fixture
def facing_skeleton():
    return Skeleton3D(facing_camera_joints())


@pytest.fixture
def small_k():
    return CameraIntrinsics.default().scaled(0.25)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

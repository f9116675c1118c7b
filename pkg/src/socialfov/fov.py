"""Horizontal field-of-view membership."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPoints, InvalidGaze
from .orientation import DirectionEstimate

DEFAULT_FOV_DEG = 120.0
# absorbs rounding when a bearing is constructed exactly on the boundary
BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class FovConfig:
    horizontal_fov: float = math.radians(DEFAULT_FOV_DEG)

    def __post_init__(self):
        if not 0 < self.horizontal_fov <= 2 * math.pi:
            raise ValueError(f"horizontal_fov must be in (0, 2*pi], got {self.horizontal_fov}")

    @classmethod
    def from_degrees(cls, deg: float) -> "FovConfig":
        return cls(math.radians(deg))

    @property
    def half_angle(self) -> float:
        return self.horizontal_fov / 2


@dataclass(frozen=True)
class FovResult:
    inside: bool
    angular_offset: float


def planar_angle(a, b) -> float:
    """Unsigned angle in [0, pi] between the XY parts of two vectors."""
    ax, ay, bx, by = float(a[0]), float(a[1]), float(b[0]), float(b[1])
    return math.atan2(abs(ax * by - ay * bx), ax * bx + ay * by)


def fov_test(gaze: DirectionEstimate, subject_pos, target, cfg: FovConfig = FovConfig()) -> FovResult:
    """Is ``target`` inside the horizontal cone around ``gaze`` seen from ``subject_pos``?

    The boundary counts as inside.
    """
    if not gaze.valid:
        raise InvalidGaze("gaze estimate is invalid")
    delta = np.asarray(target, dtype=float)[:2] - np.asarray(subject_pos, dtype=float)[:2]
    dist = math.hypot(delta[0], delta[1])
    if dist < 1e-12:
        raise CoincidentPoints("subject and target coincide in the ground plane")
    bearing = delta / dist
    offset = planar_angle(gaze.direction, bearing)
    return FovResult(offset <= cfg.half_angle + BOUNDARY_SLACK, offset)


def sees_camera(gaze: DirectionEstimate, subject_pos, cfg: FovConfig = FovConfig()) -> FovResult:
    """FOV test against the camera, which sits at the social-frame origin."""
    return fov_test(gaze, subject_pos, np.zeros(3), cfg)

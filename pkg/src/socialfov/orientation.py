"""Torso and gaze direction from 3D keypoints.

Each direction comes from the normal of a body triangle (left point, right
point, apex below them). The normal is flattened onto the ground plane,
normalized, and turned into a heading angle and a rotation about +Z that takes
the forward axis onto it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDirection, MissingJoints
from .geometry import UnitQuaternion, wrap_angle
from .skeleton import JointId, Skeleton3D

PLANAR_EPS = 1e-6
FORWARD = np.array([1.0, 0.0, 0.0])


class Kind(str, enum.Enum):
    TORSO = "torso"
    GAZE = "gaze"


@dataclass(frozen=True)
class DirectionEstimate:
    kind: Kind
    valid: bool
    raw_normal: np.ndarray | None = None
    direction: np.ndarray | None = None
    heading: float | None = None
    quaternion: UnitQuaternion | None = None

    @classmethod
    def invalid(cls, kind: Kind, raw_normal=None) -> "DirectionEstimate":
        return cls(kind=kind, valid=False, raw_normal=raw_normal)

    @classmethod
    def from_heading(cls, kind: Kind, heading: float, raw_normal=None) -> "DirectionEstimate":
        d = np.array([math.cos(heading), math.sin(heading), 0.0])
        return cls(kind, True, raw_normal, d, heading, heading_quaternion(d))


def _triangle_normal(s: Skeleton3D, left: JointId, right: JointId, apex: JointId) -> np.ndarray:
    missing = [str(j) for j in (left, right, apex) if j not in s]
    if missing:
        raise MissingJoints(missing)
    a = s[apex]
    return np.cross(s[left] - a, s[right] - a)


def torso_normal(s: Skeleton3D) -> np.ndarray:
    """(shoulder.L - pelvis) x (shoulder.R - pelvis); points out of the chest."""
    return _triangle_normal(s, JointId.SHOULDER_L, JointId.SHOULDER_R, JointId.PELVIS)


def gaze_normal(s: Skeleton3D) -> np.ndarray:
    """(eye.L - neck) x (eye.R - neck); points out of the face."""
    return _triangle_normal(s, JointId.EYE_L, JointId.EYE_R, JointId.NECK)


def ground_direction(n, eps: float = PLANAR_EPS) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    planar = math.hypot(n[0], n[1])
    if not planar >= eps:
        raise DegenerateDirection(f"normal {n.tolist()} has no horizontal component")
    return np.array([n[0] / planar, n[1] / planar, 0.0])


def heading_quaternion(d) -> UnitQuaternion:
    """Rotation about +Z taking [1, 0, 0] onto the planar unit vector ``d``."""
    theta = wrap_angle(math.atan2(d[1], d[0]))
    return UnitQuaternion.about_z(theta)


def _estimate(kind: Kind, normal_fn, s: Skeleton3D) -> DirectionEstimate:
    try:
        n = normal_fn(s)
    except MissingJoints:
        return DirectionEstimate.invalid(kind)
    try:
        d = ground_direction(n)
    except DegenerateDirection:
        return DirectionEstimate.invalid(kind, n)
    return DirectionEstimate(
        kind=kind,
        valid=True,
        raw_normal=n,
        direction=d,
        heading=wrap_angle(math.atan2(d[1], d[0])),
        quaternion=heading_quaternion(d),
    )


def estimate_orientation(s: Skeleton3D) -> tuple[DirectionEstimate, DirectionEstimate]:
    """Return ``(torso, gaze)``; either may be invalid, neither raises."""
    return _estimate(Kind.TORSO, torso_normal, s), _estimate(Kind.GAZE, gaze_normal, s)

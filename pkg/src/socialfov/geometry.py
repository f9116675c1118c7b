"""Camera model, frame conventions and quaternions.

Two frames are used throughout:

* camera frame: optical convention, X right, Y down, Z forward (meters)
* social frame: X forward (camera Z), Y left (-camera X), Z up (-camera Y)

Points are plain ``numpy`` arrays of shape ``(3,)``; the frame is implied by
the function that produced them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BehindCamera, NonPositiveDepth, OutOfBounds

# camera (x, y, z) -> social (z, -x, -y)
CAMERA_TO_SOCIAL = np.array(
    [[0.0, 0.0, 1.0],
     [-1.0, 0.0, 0.0],
     [0.0, -1.0, 0.0]]
)


@dataclass(frozen=True)
class CameraIntrinsics:
    fx: float
    fy: float
    cx: float
    cy: float
    width: int = 1280
    height: int = 720

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValueError(f"focal lengths must be positive, got fx={self.fx} fy={self.fy}")
        if not (0 < self.cx < self.width and 0 < self.cy < self.height):
            raise ValueError(
                f"principal point ({self.cx}, {self.cy}) outside {self.width}x{self.height}"
            )

    @classmethod
    def default(cls) -> "CameraIntrinsics":
        """Typical RealSense D435i color stream at 1280x720."""
        return cls(fx=911.5, fy=911.5, cx=640.0, cy=360.0, width=1280, height=720)

    def scaled(self, factor: float) -> "CameraIntrinsics":
        """Same field of view at a different resolution."""
        return CameraIntrinsics(
            fx=self.fx * factor,
            fy=self.fy * factor,
            cx=self.cx * factor,
            cy=self.cy * factor,
            width=int(round(self.width * factor)),
            height=int(round(self.height * factor)),
        )

    def contains(self, u: float, v: float) -> bool:
        return 0 <= u <= self.width - 1 and 0 <= v <= self.height - 1

    def to_dict(self) -> dict:
        return {
            "fx": self.fx,
            "fy": self.fy,
            "cx": self.cx,
            "cy": self.cy,
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CameraIntrinsics":
        missing = [k for k in ("fx", "fy", "cx", "cy", "width", "height") if k not in d]
        if missing:
            raise KeyError("intrinsics missing keys: " + ", ".join(missing))
        return cls(
            fx=float(d["fx"]),
            fy=float(d["fy"]),
            cx=float(d["cx"]),
            cy=float(d["cy"]),
            width=int(d["width"]),
            height=int(d["height"]),
        )


@dataclass(frozen=True)
class UnitQuaternion:
    """Rotation quaternion, scalar first."""

    w: float = 1.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        n = math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)
        if abs(n - 1.0) >= 1e-9:
            raise ValueError(f"quaternion norm {n!r} is not 1")

    @classmethod
    def normalized(cls, w, x, y, z) -> "UnitQuaternion":
        n = math.sqrt(w * w + x * x + y * y + z * z)
        if n == 0:
            raise ValueError("zero quaternion")
        return cls(w / n, x / n, y / n, z / n)

    @classmethod
    def about_z(cls, angle: float) -> "UnitQuaternion":
        return cls(math.cos(angle / 2), 0.0, 0.0, math.sin(angle / 2))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def as_matrix(self) -> np.ndarray:
        w, x, y, z = self.w, self.x, self.y, self.z
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ]
        )

    def rotate(self, v) -> np.ndarray:
        u = np.array([self.x, self.y, self.z])
        v = np.asarray(v, dtype=float)
        t = 2.0 * np.cross(u, v)
        return v + self.w * t + np.cross(u, t)

    def is_identity(self) -> bool:
        return self.w == 1.0 and self.x == 0.0 and self.y == 0.0 and self.z == 0.0


@dataclass(frozen=True)
class FrameConvention:
    """Camera-to-social mapping with an optional leveling rotation.

    The leveling quaternion is applied after the axis permutation and is the
    hook for a tilted camera mount.
    """

    leveling: UnitQuaternion = field(default_factory=UnitQuaternion)

    def matrix(self) -> np.ndarray:
        if self.leveling.is_identity():
            return CAMERA_TO_SOCIAL.copy()
        return self.leveling.as_matrix() @ CAMERA_TO_SOCIAL


def backproject(u: float, v: float, depth_mm: float, k: CameraIntrinsics) -> np.ndarray:
    """Pixel plus depth (millimeters) to a camera-frame point in meters."""
    if not depth_mm > 0:
        raise NonPositiveDepth(f"depth must be positive, got {depth_mm}")
    if not k.contains(u, v):
        raise OutOfBounds(f"pixel ({u}, {v}) outside {k.width}x{k.height}")
    z = depth_mm / 1000.0
    return np.array([(u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z])


def project(p, k: CameraIntrinsics) -> tuple[float, float, float]:
    """Camera-frame point to ``(u, v, depth_mm)``; inverse of :func:`backproject`."""
    x, y, z = (float(c) for c in p)
    if not z > 0:
        raise BehindCamera(f"point has z={z}")
    return k.fx * x / z + k.cx, k.fy * y / z + k.cy, z * 1000.0


def camera_to_social(p, conv: FrameConvention | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    out = np.stack([z, -x, -y], axis=-1)
    if conv is not None and not conv.leveling.is_identity():
        out = out @ conv.leveling.as_matrix().T
    return out


def social_to_camera(p, conv: FrameConvention | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if conv is not None and not conv.leveling.is_identity():
        p = p @ conv.leveling.as_matrix()
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    return np.stack([-y, -z, x], axis=-1)


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    r = math.remainder(a, 2 * math.pi)
    if r <= -math.pi:
        r += 2 * math.pi
    return r


def heading_of(v) -> float:
    return math.atan2(v[1], v[0])

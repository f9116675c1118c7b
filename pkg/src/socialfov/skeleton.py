"""2D keypoints plus depth to 3D skeletons."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import NoValidDepth, OutOfBounds
from .geometry import CameraIntrinsics, FrameConvention, backproject, camera_to_social

DEFAULT_CONF_THRESHOLD = 0.5
DEFAULT_RADIUS = 5


class JointId(str, enum.Enum):
    NOSE = "nose"
    EYE_L = "eye.L"
    EYE_R = "eye.R"
    EAR_L = "ear.L"
    EAR_R = "ear.R"
    SHOULDER_L = "shoulder.L"
    SHOULDER_R = "shoulder.R"
    ELBOW_L = "elbow.L"
    ELBOW_R = "elbow.R"
    WRIST_L = "wrist.L"
    WRIST_R = "wrist.R"
    HIP_L = "hip.L"
    HIP_R = "hip.R"
    KNEE_L = "knee.L"
    KNEE_R = "knee.R"
    ANKLE_L = "ankle.L"
    ANKLE_R = "ankle.R"
    # derived, never detected
    PELVIS = "pelvis"
    NECK = "neck"

    def __str__(self):
        return self.value


COCO_JOINTS = tuple(JointId)[:17]
DERIVED_JOINTS = (JointId.PELVIS, JointId.NECK)


@dataclass
class Keypoint:
    u: float
    v: float
    confidence: float


@dataclass
class Skeleton2D:
    keypoints: dict[JointId, Keypoint]
    timestamp: float
    confidence: float = 1.0

    def __post_init__(self):
        for j, kp in self.keypoints.items():
            if j in DERIVED_JOINTS:
                raise ValueError(f"derived joint {j} cannot be detected")
            if not 0.0 <= kp.confidence <= 1.0:
                raise ValueError(f"confidence of {j} outside [0, 1]: {kp.confidence}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"detection confidence outside [0, 1]: {self.confidence}")

    def present(self, threshold: float = DEFAULT_CONF_THRESHOLD) -> list[JointId]:
        return [j for j in COCO_JOINTS if j in self.keypoints and self.keypoints[j].confidence >= threshold]


@dataclass
class DepthFrame:
    """Row-major uint16 depth in millimeters; 0 marks an invalid pixel."""

    data: np.ndarray
    timestamp: float = 0.0

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.uint16)
        if self.data.ndim != 2:
            raise ValueError("depth data must be 2D (height, width)")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @classmethod
    def filled(cls, width: int, height: int, value: int, timestamp: float = 0.0) -> "DepthFrame":
        return cls(np.full((height, width), value, dtype=np.uint16), timestamp)


def _midpoint(a, b):
    return 0.5 * (a + b)


@dataclass
class Skeleton3D:
    """Social-frame joints in meters. Pelvis and neck are derived on construction."""

    joints: dict[JointId, np.ndarray] = field(default_factory=dict)
    timestamp: float = 0.0
    track_id: int | None = None

    def __post_init__(self):
        self.joints = {
            JointId(j): np.asarray(p, dtype=float)
            for j, p in self.joints.items()
            if JointId(j) not in DERIVED_JOINTS
        }
        j = self.joints
        if JointId.HIP_L in j and JointId.HIP_R in j:
            j[JointId.PELVIS] = _midpoint(j[JointId.HIP_L], j[JointId.HIP_R])
        if JointId.SHOULDER_L in j and JointId.SHOULDER_R in j:
            j[JointId.NECK] = _midpoint(j[JointId.SHOULDER_L], j[JointId.SHOULDER_R])

    def __contains__(self, joint) -> bool:
        return JointId(joint) in self.joints

    def __getitem__(self, joint) -> np.ndarray:
        return self.joints[JointId(joint)]

    def __len__(self):
        return len(self.joints)

    def get(self, joint):
        return self.joints.get(JointId(joint))

    @property
    def pelvis(self):
        return self.joints.get(JointId.PELVIS)

    def transformed(self, fn) -> "Skeleton3D":
        """Apply ``fn`` to every detected joint and re-derive pelvis/neck."""
        return Skeleton3D(
            {j: fn(p) for j, p in self.joints.items() if j not in DERIVED_JOINTS},
            self.timestamp,
            self.track_id,
        )


def pixel_index(c: float) -> int:
    """Nearest pixel, halves rounded up."""
    return int(math.floor(c + 0.5))


def sample_depth(frame: DepthFrame, u: float, v: float, radius: int = DEFAULT_RADIUS) -> int:
    """Minimum valid depth (mm) within a disk of ``radius`` pixels around (u, v).

    The disk is clipped at the image border and zero pixels are skipped.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    ui, vi = pixel_index(u), pixel_index(v)
    if not (0 <= ui < frame.width and 0 <= vi < frame.height):
        raise OutOfBounds(f"pixel ({u}, {v}) outside {frame.width}x{frame.height}")
    d = kernels.disk_min(frame.data, ui, vi, int(radius))
    if d == 0:
        raise NoValidDepth(f"no valid depth within {radius} px of ({ui}, {vi})")
    return d


def lift_skeleton(
    kp: Skeleton2D,
    depth: DepthFrame,
    k: CameraIntrinsics,
    conv: FrameConvention | None = None,
    conf_threshold: float = DEFAULT_CONF_THRESHOLD,
    radius: int = DEFAULT_RADIUS,
    max_time_skew: float | None = 1.0 / 30.0,
) -> Skeleton3D:
    """Back-project every confident joint using min-in-disk depth sampling.

    Joints that fail the confidence test, fall outside the image or have no
    valid depth nearby are left out; nothing here aborts the frame.
    """
    if max_time_skew is not None and abs(kp.timestamp - depth.timestamp) > max_time_skew + 1e-9:
        raise ValueError(
            f"keypoints at t={kp.timestamp} and depth at t={depth.timestamp} are not the same frame"
        )
    names, us, vs, pix_u, pix_v = [], [], [], [], []
    for j in kp.present(conf_threshold):
        p = kp.keypoints[j]
        ui, vi = pixel_index(p.u), pixel_index(p.v)
        if not (0 <= ui < depth.width and 0 <= vi < depth.height) or not k.contains(p.u, p.v):
            continue
        names.append(j)
        us.append(p.u)
        vs.append(p.v)
        pix_u.append(ui)
        pix_v.append(vi)
    joints = {}
    if names:
        depths = kernels.disk_min_many(depth.data, pix_u, pix_v, int(radius))
        for j, u, v, d in zip(names, us, vs, depths):
            if d == 0:
                continue
            joints[j] = camera_to_social(backproject(u, v, float(d), k), conv)
    return Skeleton3D(joints, kp.timestamp)

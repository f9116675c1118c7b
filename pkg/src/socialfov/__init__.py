"""Human pose lifting, orientation and field-of-view estimation from RGB-D keypoints."""
from .geometry import (
    CameraIntrinsics,
    FrameConvention,
    UnitQuaternion,
    backproject,
    camera_to_social,
    project,
    wrap_angle,
)
from .kernels import BACKEND
from .orientation import DirectionEstimate, estimate_orientation
from .skeleton import DepthFrame, JointId, Skeleton2D, Skeleton3D, lift_skeleton, sample_depth

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CameraIntrinsics",
    "DepthFrame",
    "DirectionEstimate",
    "FrameConvention",
    "JointId",
    "Skeleton2D",
    "Skeleton3D",
    "UnitQuaternion",
    "backproject",
    "camera_to_social",
    "estimate_orientation",
    "lift_skeleton",
    "project",
    "sample_depth",
    "wrap_angle",
]

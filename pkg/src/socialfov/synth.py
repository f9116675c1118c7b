"""Synthetic walking subjects rendered into recordings with exact ground truth.

World frame: Z up, the camera sits at ``(0, 0, camera_height)`` looking along
world +X, so the social frame is the world frame shifted down by the camera
height. The body is a rigid 15-joint stick figure (COCO-17 minus the ears)
animated along one of a few back-and-forth walking patterns.

Depth frames are a far background (10 m) with one flat disk per visible joint,
composited nearest-first. A joint counts as self-occluded, and is reported
with zero confidence, when a nearer joint's disk lies close enough to
contaminate its depth sample; that is the pixel-level analogue of a detector
flagging a hidden keypoint.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError
from .formats import FrameRecord, GroundTruth, GtEntry, Recording, depth_name
from .geometry import CameraIntrinsics, project, social_to_camera, wrap_angle
from .skeleton import DEFAULT_RADIUS, DepthFrame, JointId as J, Keypoint, Skeleton2D

TRAJECTORIES = ("walk_straight", "arms_crossed_walk", "sudden_dodge", "zigzag_head_turns")
BODY_JOINTS = (
    J.NOSE, J.EYE_L, J.EYE_R,
    J.SHOULDER_L, J.SHOULDER_R, J.ELBOW_L, J.ELBOW_R, J.WRIST_L, J.WRIST_R,
    J.HIP_L, J.HIP_R, J.KNEE_L, J.KNEE_R, J.ANKLE_L, J.ANKLE_R,
)
BACKGROUND_MM = 10_000
DISK_RADIUS_PX = 8.0
CAMERA_HEIGHT_M = 1.25

# shuttle geometry, meters in front of the camera
NEAR_X, FAR_X = 1.8, 3.4
TURN_TIME = 1.5
STRIDE = 1.3


@dataclass
class NoiseModel:
    pixel_sigma: float = 0.0
    depth_sigma_mm: float = 0.0
    dropout: float = 0.0

    def __post_init__(self):
        if self.pixel_sigma < 0 or self.depth_sigma_mm < 0:
            raise ConfigError("noise sigmas must be >= 0")
        if not 0.0 <= self.dropout <= 1.0:
            raise ConfigError("dropout must be in [0, 1]")


@dataclass
class SyntheticScenario:
    seed: int = 0
    duration: float = 10.0
    fps: float = 30.0
    trajectory: str = "walk_straight"
    noise: NoiseModel = field(default_factory=NoiseModel)
    camera_height: float = CAMERA_HEIGHT_M

    def __post_init__(self):
        if isinstance(self.noise, dict):
            self.noise = NoiseModel(**self.noise)
        if self.trajectory not in TRAJECTORIES:
            raise ConfigError(
                f"unknown trajectory {self.trajectory!r}; valid options: {', '.join(TRAJECTORIES)}"
            )
        if not self.duration >= 0 or not self.fps > 0:
            raise ConfigError("duration must be >= 0 and fps > 0")

    @property
    def n_frames(self) -> int:
        return int(round(self.duration * self.fps))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SyntheticScenario":
        known = {"seed", "duration", "fps", "trajectory", "noise", "camera_height"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
        d = dict(d)
        if "noise" in d:
            noise = d["noise"]
            bad = set(noise) - {"pixel_sigma", "depth_sigma_mm", "dropout"}
            if bad:
                raise ConfigError(f"unknown noise keys: {', '.join(sorted(bad))}")
            d["noise"] = NoiseModel(**noise)
        return cls(**d)


# ---------------------------------------------------------------- motion


@dataclass
class Pose:
    x: float
    y: float
    yaw: float  # torso, unwrapped
    head: float  # head yaw relative to torso
    gait_phase: float
    gait_amp: float  # 0 standing .. 1 full stride
    arms_crossed: bool = False


def _ease(s):
    return 0.5 - 0.5 * math.cos(math.pi * s)


def _shuttle(t, speed):
    """Back-and-forth along X, turning in place (counterclockwise) at each end.

    Returns (x, leg progress or None while turning, direction sign, yaw, gait
    amplitude, distance walked).
    """
    d = FAR_X - NEAR_X
    leg = d / speed
    cycle = 2 * (leg + TURN_TIME)
    n, tc = divmod(t, cycle)
    walked = 2 * d * n
    base_yaw = 2 * math.pi * n
    if tc < leg:
        p = tc / leg
        return FAR_X - d * _ease(p), p, -1.0, base_yaw + math.pi, math.sin(math.pi * p), walked + d * _ease(p)
    tc -= leg
    if tc < TURN_TIME:
        return NEAR_X, None, 0.0, base_yaw + math.pi + math.pi * _ease(tc / TURN_TIME), 0.0, walked + d
    tc -= TURN_TIME
    if tc < leg:
        p = tc / leg
        return NEAR_X + d * _ease(p), p, 1.0, base_yaw + 2 * math.pi, math.sin(math.pi * p), walked + d + d * _ease(p)
    tc -= leg
    return FAR_X, None, 0.0, base_yaw + 2 * math.pi + math.pi * _ease(tc / TURN_TIME), 0.0, walked + 2 * d


def motion(kind: str, t: float) -> Pose:
    if kind == "walk_straight":
        x, _, _, yaw, amp, walked = _shuttle(t, 1.0)
        return Pose(x, 0.2, yaw, 0.0, 2 * math.pi * walked / STRIDE, amp)
    if kind == "arms_crossed_walk":
        x, _, _, yaw, amp, walked = _shuttle(t, 0.8)
        return Pose(x, -0.15, yaw, 0.0, 2 * math.pi * walked / STRIDE, amp, arms_crossed=True)
    if kind == "sudden_dodge":
        x, p, sign, yaw, amp, walked = _shuttle(t, 1.0)
        y, twist = 0.0, 0.0
        if p is not None and 0.4 <= p <= 0.6:
            # quick side-step and back; alternate sides by leg direction
            w = (p - 0.4) / 0.2
            y = 0.35 * sign * math.sin(math.pi * w) ** 2
            twist = 0.3 * sign * math.sin(2 * math.pi * w)
        return Pose(x, y, yaw + twist, 0.0, 2 * math.pi * walked / STRIDE, amp)
    if kind == "zigzag_head_turns":
        x, p, sign, yaw, amp, walked = _shuttle(t, 0.9)
        a, zigs = 0.3, 1
        y, heading_dev = 0.1, 0.0
        if p is not None:
            s = _ease(p)
            y += 0.5 * a * (1 - math.cos(2 * math.pi * zigs * s)) - 0.5 * a
            # slope of the path with respect to distance walked
            slope = 0.5 * a * 2 * math.pi * zigs * math.sin(2 * math.pi * zigs * s) / (FAR_X - NEAR_X)
            heading_dev = sign * math.atan(slope)
        head = 0.55 * math.sin(2 * math.pi * 0.2 * t)
        return Pose(x, y, yaw + heading_dev, head, 2 * math.pi * walked / STRIDE, amp)
    raise ConfigError(f"unknown trajectory {kind!r}; valid options: {', '.join(TRAJECTORIES)}")


def _rot_z(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def body_joints(pose: Pose) -> dict[J, np.ndarray]:
    """World-frame joints; body-local axes are x forward, y left, z up."""
    local = {}
    for side, j in ((1.0, "L"), (-1.0, "R")):
        sh = np.array([0.0, 0.19 * side, 1.42])
        hip = np.array([0.0, 0.10 * side, 0.92])
        local[J(f"shoulder.{j}")] = sh
        local[J(f"hip.{j}")] = hip
        if pose.arms_crossed:
            local[J(f"elbow.{j}")] = np.array([0.08, 0.20 * side, 1.16])
            local[J(f"wrist.{j}")] = np.array([0.24, -0.09 * side, 1.24])
        else:
            a = 0.35 * pose.gait_amp * math.sin(pose.gait_phase) * -side
            elbow = sh + np.array([0.28 * math.sin(a), 0.02 * side, -0.28 * math.cos(a)])
            b = 1.3 * a
            local[J(f"elbow.{j}")] = elbow
            local[J(f"wrist.{j}")] = elbow + np.array([0.26 * math.sin(b), 0.01 * side, -0.26 * math.cos(b)])
        g = 0.4 * pose.gait_amp * math.sin(pose.gait_phase) * side
        knee = hip + np.array([0.45 * math.sin(g), 0.0, -0.45 * math.cos(g)])
        k = g - 0.3 * pose.gait_amp * max(0.0, math.sin(pose.gait_phase + 0.5) * side)
        local[J(f"knee.{j}")] = knee
        local[J(f"ankle.{j}")] = knee + np.array([0.42 * math.sin(k), 0.0, -0.42 * math.cos(k)])
    pivot = np.array([0.0, 0.0, 1.50])
    rh = _rot_z(pose.head)
    local[J.EYE_L] = pivot + rh @ np.array([0.09, 0.032, 0.12])
    local[J.EYE_R] = pivot + rh @ np.array([0.09, -0.032, 0.12])
    local[J.NOSE] = pivot + rh @ np.array([0.11, 0.0, 0.065])
    r = _rot_z(pose.yaw)
    origin = np.array([pose.x, pose.y, 0.0])
    return {j: origin + r @ local[j] for j in BODY_JOINTS}


# ---------------------------------------------------------------- rendering


def camera_to_world_matrix(camera_height: float = CAMERA_HEIGHT_M) -> np.ndarray:
    m = np.eye(4)
    m[:3, :3] = np.array([[0.0, 0.0, 1.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]])
    m[:3, 3] = [0.0, 0.0, camera_height]
    return m


def _render(k: CameraIntrinsics, us, vs, depths, timestamp):
    data = np.full((k.height, k.width), BACKGROUND_MM, dtype=np.uint16)
    if len(us):
        kernels.render_disks(data, us, vs, depths, DISK_RADIUS_PX)
    return DepthFrame(data, timestamp)


def _frame_loader(k, us, vs, depths, timestamp):
    return lambda: _render(k, us, vs, depths, timestamp)


def _occluded(us, vs, zs, visible):
    """Joints with a nearer disk within contamination reach of their sample."""
    reach = DISK_RADIUS_PX + DEFAULT_RADIUS + 1.0
    n = len(us)
    out = np.zeros(n, dtype=bool)
    idx = np.flatnonzero(visible)
    for i in idx:
        for j in idx:
            if j != i and zs[j] < zs[i] and (us[i] - us[j]) ** 2 + (vs[i] - vs[j]) ** 2 < reach * reach:
                out[i] = True
                break
    return out


def generate(scenario: SyntheticScenario, k: CameraIntrinsics | None = None) -> tuple[Recording, GroundTruth]:
    """Render a scenario into an in-memory recording plus world-frame ground truth.

    Depth frames are rendered lazily on access, from values fixed at
    generation time, so the output only depends on the scenario and ``k``.
    """
    k = k or CameraIntrinsics.default()
    rng = np.random.default_rng(scenario.seed)
    noise = scenario.noise
    h = scenario.camera_height
    n_joints = len(BODY_JOINTS)
    frames, entries = [], []
    for i in range(scenario.n_frames):
        t = i / scenario.fps
        pose = motion(scenario.trajectory, t)
        world = body_joints(pose)
        # draw every random number every frame so streams stay aligned across settings
        pix_noise = rng.normal(0.0, 1.0, size=(n_joints, 2)) * noise.pixel_sigma
        depth_noise = rng.normal(0.0, 1.0, size=n_joints) * noise.depth_sigma_mm
        drop = rng.random(n_joints) < noise.dropout
        conf = 0.6 + 0.4 * rng.random(n_joints)

        us, vs, zs = np.zeros(n_joints), np.zeros(n_joints), np.zeros(n_joints)
        visible = np.zeros(n_joints, dtype=bool)
        for n, j in enumerate(BODY_JOINTS):
            cam = social_to_camera(world[j] - np.array([0.0, 0.0, h]))
            if cam[2] <= 0:
                continue
            us[n], vs[n], zs[n] = project(cam, k)
            visible[n] = k.contains(us[n], vs[n])
        occluded = _occluded(us, vs, zs, visible)

        rendered = np.flatnonzero(visible)
        depths = np.clip(np.rint(zs[rendered] + depth_noise[rendered]), 1, 65535).astype(np.uint16)
        keypoints = {}
        for n, j in enumerate(BODY_JOINTS):
            if not visible[n]:
                continue
            detected = not (occluded[n] or drop[n])
            keypoints[j] = Keypoint(
                float(us[n] + pix_noise[n, 0]),
                float(vs[n] + pix_noise[n, 1]),
                float(conf[n]) if detected else 0.0,
            )
        det_conf = float(np.mean([kp.confidence for kp in keypoints.values()])) if keypoints else 0.0
        detections = [Skeleton2D(keypoints, t, det_conf)] if keypoints else []
        frames.append(
            FrameRecord(
                i, t, detections, depth_name(i),
                _frame_loader(k, us[rendered].copy(), vs[rendered].copy(), depths, t),
            )
        )
        entries.append(
            GtEntry(t, world, wrap_angle(pose.yaw), wrap_angle(pose.yaw + pose.head))
        )
    return Recording(k, frames), GroundTruth(entries, camera_to_world_matrix(h))

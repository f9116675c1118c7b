"""Pipeline tunables and their JSON config file.

The file is a JSON object. Keys may be written flat (``"kalman.q": 0.5``) or
nested (``{"kalman": {"q": 0.5}}``); unknown keys are rejected.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .fov import DEFAULT_FOV_DEG, FovConfig
from .geometry import FrameConvention, UnitQuaternion
from .skeleton import DEFAULT_CONF_THRESHOLD, DEFAULT_RADIUS
from .smoothing import DEFAULT_EXPIRY_FRAMES, DEFAULT_GATE_M, KalmanParams

# config key -> (attribute, default, description)
KEYS = {
    "confidence_threshold": ("confidence_threshold", DEFAULT_CONF_THRESHOLD, "minimum keypoint confidence"),
    "sampling_radius": ("sampling_radius", DEFAULT_RADIUS, "depth sampling disk radius, pixels"),
    "fov_deg": ("fov_deg", DEFAULT_FOV_DEG, "horizontal field of view, degrees"),
    "kalman.q": ("kalman_q", KalmanParams.q, "heading process noise, rad^2/s^3"),
    "kalman.r": ("kalman_r", KalmanParams.r, "heading measurement variance, rad^2"),
    "track.gate_m": ("gate_m", DEFAULT_GATE_M, "association gate on pelvis distance, meters"),
    "track.expiry_frames": ("expiry_frames", DEFAULT_EXPIRY_FRAMES, "frames a track survives unseen"),
    "leveling_quaternion": ("leveling_quaternion", (1.0, 0.0, 0.0, 0.0), "camera->social leveling [w, x, y, z]"),
}


@dataclass
class Config:
    confidence_threshold: float = DEFAULT_CONF_THRESHOLD
    sampling_radius: int = DEFAULT_RADIUS
    fov_deg: float = DEFAULT_FOV_DEG
    kalman_q: float = KalmanParams.q
    kalman_r: float = KalmanParams.r
    gate_m: float = DEFAULT_GATE_M
    expiry_frames: int = DEFAULT_EXPIRY_FRAMES
    leveling_quaternion: tuple = field(default=(1.0, 0.0, 0.0, 0.0))

    def __post_init__(self):
        self.validate()

    def validate(self):
        def bad(key, why):
            raise ConfigError(f"config key {key!r}: {why}")

        if not 0.0 <= self.confidence_threshold <= 1.0:
            bad("confidence_threshold", "must be in [0, 1]")
        if int(self.sampling_radius) != self.sampling_radius or self.sampling_radius < 0:
            bad("sampling_radius", "must be a non-negative integer")
        if not 0 < self.fov_deg <= 360:
            bad("fov_deg", "must be in (0, 360]")
        if self.kalman_q < 0:
            bad("kalman.q", "must be >= 0")
        if not self.kalman_r > 0:
            bad("kalman.r", "must be > 0")
        if not self.gate_m > 0:
            bad("track.gate_m", "must be > 0")
        if int(self.expiry_frames) != self.expiry_frames or self.expiry_frames < 0:
            bad("track.expiry_frames", "must be a non-negative integer")
        q = self.leveling_quaternion
        if len(q) != 4 or abs(math.sqrt(sum(c * c for c in q)) - 1.0) >= 1e-9:
            bad("leveling_quaternion", "must be a unit quaternion [w, x, y, z]")

    @property
    def kalman(self) -> KalmanParams:
        return KalmanParams(q=self.kalman_q, r=self.kalman_r)

    @property
    def fov(self) -> FovConfig:
        return FovConfig.from_degrees(self.fov_deg)

    @property
    def frame_convention(self) -> FrameConvention:
        return FrameConvention(UnitQuaternion(*self.leveling_quaternion))

    def to_dict(self) -> dict:
        return {key: getattr(self, attr) if attr != "leveling_quaternion" else list(self.leveling_quaternion)
                for key, (attr, _, _) in KEYS.items()}


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def config_from_dict(d: dict) -> Config:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    values = {}
    for key, v in _flatten(d).items():
        if key not in KEYS:
            raise ConfigError(f"unknown config key {key!r}; valid keys: {', '.join(KEYS)}")
        attr = KEYS[key][0]
        if attr == "leveling_quaternion":
            if not isinstance(v, list) or not all(isinstance(c, (int, float)) for c in v):
                raise ConfigError(f"config key {key!r}: must be a list of 4 numbers")
            v = tuple(float(c) for c in v)
        elif isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"config key {key!r}: must be a number")
        values[attr] = v
    return Config(**values)


def load_config(path) -> Config:
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    return config_from_dict(d)


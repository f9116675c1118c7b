"""Per-frame processing: lift, orient, track, smooth, FOV."""
from __future__ import annotations

from typing import Iterator

from .config import Config
from .errors import CoincidentPoints
from .fov import sees_camera
from .formats import Recording
from .geometry import CameraIntrinsics
from .orientation import DirectionEstimate, estimate_orientation
from .skeleton import DepthFrame, Skeleton2D, lift_skeleton
from .smoothing import Tracker


def _heading_block(raw: DirectionEstimate, smooth: DirectionEstimate) -> dict:
    return {
        "raw_heading": raw.heading if raw.valid else None,
        "smoothed_heading": smooth.heading if smooth.valid else None,
        "quaternion": raw.quaternion.as_array().tolist() if raw.valid else None,
        "smoothed_quaternion": smooth.quaternion.as_array().tolist() if smooth.valid else None,
        "valid": raw.valid,
    }


class Pipeline:
    def __init__(self, intrinsics: CameraIntrinsics, config: Config | None = None):
        self.k = intrinsics
        self.config = config or Config()
        self.conv = self.config.frame_convention
        self.fov_cfg = self.config.fov
        self.tracker = Tracker(self.config.kalman, self.config.gate_m, self.config.expiry_frames)
        self.frames = 0
        self.results = 0
        self.valid_gaze = 0

    def process_frame(self, timestamp: float, detections: list[Skeleton2D], depth: DepthFrame,
                      frame_index: int | None = None) -> list[dict]:
        """One result object per tracked detection, in detection order."""
        self.frames += 1
        skels = [
            lift_skeleton(d, depth, self.k, self.conv, self.config.confidence_threshold,
                          int(self.config.sampling_radius))
            for d in detections
        ]
        estimates = [estimate_orientation(s) for s in skels]
        out = []
        for si, track, st, sg in self.tracker.step(skels, estimates, timestamp):
            s = skels[si]
            torso, gaze = estimates[si]
            fov = {"inside": None, "offset": None}
            if sg.valid:
                try:
                    r = sees_camera(sg, s.pelvis, self.fov_cfg)
                    fov = {"inside": r.inside, "offset": r.angular_offset}
                except CoincidentPoints:
                    pass
            self.valid_gaze += gaze.valid
            out.append(
                {
                    "timestamp": timestamp,
                    "frame_index": frame_index,
                    "track_id": track.track_id,
                    "joints3d": {str(j): p.tolist() for j, p in s.joints.items()},
                    "torso": _heading_block(torso, st),
                    "gaze": _heading_block(gaze, sg),
                    "fov": fov,
                }
            )
        self.results += len(out)
        return out

    def run(self, recording: Recording) -> Iterator[dict]:
        for fr in recording:
            yield from self.process_frame(fr.timestamp, fr.detections, fr.load_depth(), fr.index)

    def summary(self) -> dict:
        return {
            "frames": self.frames,
            "results": self.results,
            "tracks": self.tracker.next_id,
            "valid_gaze_pct": 100.0 * self.valid_gaze / self.results if self.results else 0.0,
        }

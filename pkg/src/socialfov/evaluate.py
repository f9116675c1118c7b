"""Comparison of pipeline results with ground truth."""
from __future__ import annotations

import bisect
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidEstimate, NoSharedJoints, NonRigidExtrinsics
from .fov import FovConfig, planar_angle
from .formats import GroundTruth
from .geometry import camera_to_social, wrap_angle
from .orientation import DirectionEstimate
from .skeleton import JointId, Skeleton3D

DEFAULT_TOLERANCE = 1.0 / 60.0


def heading_error(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


def angular_error(pred: DirectionEstimate, gt_heading: float) -> float:
    if not pred.valid:
        raise InvalidEstimate(f"{pred.kind} estimate is invalid")
    return heading_error(pred.heading, gt_heading)


def mpjpe(pred: Skeleton3D, gt: Skeleton3D) -> float:
    shared = [j for j in pred.joints if j in gt.joints]
    if not shared:
        raise NoSharedJoints("skeletons have no joint in common")
    return float(np.mean([np.linalg.norm(pred[j] - gt[j]) for j in shared]))


def check_rigid(m, tol: float = 1e-6) -> None:
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise NonRigidExtrinsics(f"extrinsics must be 4x4, got {m.shape}")
    R = m[:3, :3]
    if not np.allclose(R.T @ R, np.eye(3), atol=tol) or abs(np.linalg.det(R) - 1.0) > tol:
        raise NonRigidExtrinsics("rotation block is not orthonormal with determinant +1")
    if not np.allclose(m[3], [0, 0, 0, 1]):
        raise NonRigidExtrinsics("bottom row must be [0, 0, 0, 1]")


def apply_extrinsics(points, camera_to_world) -> np.ndarray:
    """World-frame points (..., 3) to the social frame of the camera."""
    check_rigid(camera_to_world)
    m = np.asarray(camera_to_world, dtype=float)
    R, t = m[:3, :3], m[:3, 3]
    cam = (np.asarray(points, dtype=float) - t) @ R
    return camera_to_social(cam)


def world_heading_to_social(heading: float, camera_to_world) -> float:
    R = np.asarray(camera_to_world, dtype=float)[:3, :3]
    d = np.array([math.cos(heading), math.sin(heading), 0.0]) @ R
    s = camera_to_social(d)
    return wrap_angle(math.atan2(s[1], s[0]))


@dataclass
class Alignment:
    pairs: list[tuple[int, int]] = field(default_factory=list)  # (result index, gt index)
    unmatched_results: list[int] = field(default_factory=list)
    unmatched_gt: list[int] = field(default_factory=list)


def time_align(result_times, gt_times, tolerance: float = DEFAULT_TOLERANCE) -> Alignment:
    """Match results to ground truth by nearest timestamp within ``tolerance``.

    Each ground-truth entry is used at most once; closer pairs win, ties go to
    the earlier result.
    """
    gt_times = list(gt_times)
    cands = []
    for ri, t in enumerate(result_times):
        lo = bisect.bisect_left(gt_times, t - tolerance)
        hi = bisect.bisect_right(gt_times, t + tolerance)
        for gi in range(lo, hi):
            dt = abs(gt_times[gi] - t)
            if dt <= tolerance:
                cands.append((dt, ri, gi))
    cands.sort()
    used_r, used_g = set(), set()
    out = Alignment()
    for _, ri, gi in cands:
        if ri in used_r or gi in used_g:
            continue
        used_r.add(ri)
        used_g.add(gi)
        out.pairs.append((ri, gi))
    out.pairs.sort()
    out.unmatched_results = [i for i in range(len(result_times)) if i not in used_r]
    out.unmatched_gt = [i for i in range(len(gt_times)) if i not in used_g]
    return out


def _stats(values) -> dict:
    if not values:
        return {"count": 0, "mean": None, "median": None, "p95": None}
    a = np.asarray(values, dtype=float)
    return {
        "count": int(a.size),
        "mean": float(a.mean()),
        "median": float(np.median(a)),
        "p95": float(np.percentile(a, 95)),
    }


@dataclass
class EvalReport:
    matched: int = 0
    unmatched_results: int = 0
    unmatched_gt: int = 0
    mpjpe_mean: float | None = None
    mpjpe_per_joint: dict = field(default_factory=dict)
    torso_raw: dict = field(default_factory=lambda: _stats([]))
    torso_smoothed: dict = field(default_factory=lambda: _stats([]))
    gaze_raw: dict = field(default_factory=lambda: _stats([]))
    gaze_smoothed: dict = field(default_factory=lambda: _stats([]))
    torso_smoothed_all: dict = field(default_factory=lambda: _stats([]))
    gaze_smoothed_all: dict = field(default_factory=lambda: _stats([]))
    fov_accuracy: float | None = None
    fov_count: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        def fmt(v, scale=1.0, unit=""):
            return "-" if v is None else f"{v * scale:.3f}{unit}"

        lines = [
            f"matched frames      {self.matched}",
            f"unmatched results   {self.unmatched_results}",
            f"unmatched gt        {self.unmatched_gt}",
            f"MPJPE mean          {fmt(self.mpjpe_mean, 1000, ' mm')}",
        ]
        for name in ("torso_raw", "torso_smoothed", "torso_smoothed_all",
                     "gaze_raw", "gaze_smoothed", "gaze_smoothed_all"):
            s = getattr(self, name)
            lines.append(
                f"{name:<19} mean {fmt(s['mean'], 180 / math.pi, ' deg')}"
                f"  median {fmt(s['median'], 180 / math.pi, ' deg')}"
                f"  p95 {fmt(s['p95'], 180 / math.pi, ' deg')}  n={s['count']}"
            )
        lines.append(f"FOV accuracy        {fmt(self.fov_accuracy)}  n={self.fov_count}")
        for j, v in self.mpjpe_per_joint.items():
            lines.append(f"  {j:<12} {fmt(v, 1000, ' mm')}")
        return "\n".join(lines)


def skeleton_from_result(obj: dict) -> Skeleton3D:
    return Skeleton3D({JointId(k): v for k, v in obj["joints3d"].items()}, obj["timestamp"])


def evaluate(results: list[dict], gt: GroundTruth, tolerance: float = DEFAULT_TOLERANCE,
             fov_cfg: FovConfig = FovConfig()) -> EvalReport:
    align = time_align([r["timestamp"] for r in results], [e.timestamp for e in gt.entries], tolerance)
    rep = EvalReport(
        matched=len(align.pairs),
        unmatched_results=len(align.unmatched_results),
        unmatched_gt=len(align.unmatched_gt),
    )
    check_rigid(gt.camera_to_world)
    per_frame, per_joint = [], {}
    errs = {f"{k}_{w}": [] for k in ("torso", "gaze") for w in ("raw", "smoothed", "smoothed_all")}
    fov_hits = []
    for ri, gi in align.pairs:
        r, e = results[ri], gt.entries[gi]
        names = list(e.joints)
        social = apply_extrinsics(np.array([e.joints[j] for j in names]).reshape(-1, 3), gt.camera_to_world)
        gt_skel = Skeleton3D(dict(zip(names, social)), e.timestamp)
        pred = skeleton_from_result(r)
        try:
            per_frame.append(mpjpe(pred, gt_skel))
            for j in pred.joints:
                if j in gt_skel.joints:
                    per_joint.setdefault(str(j), []).append(float(np.linalg.norm(pred[j] - gt_skel[j])))
        except NoSharedJoints:
            pass
        gt_heading = {}
        for kind, h in (("torso", e.torso_heading), ("gaze", e.gaze_heading)):
            if h is None:
                continue
            g = gt_heading[kind] = world_heading_to_social(h, gt.camera_to_world)
            raw, smooth = r[kind].get("raw_heading"), r[kind].get("smoothed_heading")
            if smooth is not None:
                errs[f"{kind}_smoothed_all"].append(heading_error(smooth, g))
            # raw and smoothed are compared on the same frames
            if raw is not None:
                errs[f"{kind}_raw"].append(heading_error(raw, g))
                if smooth is not None:
                    errs[f"{kind}_smoothed"].append(heading_error(smooth, g))
        pred_inside = r.get("fov", {}).get("inside")
        if pred_inside is not None and "gaze" in gt_heading and gt_skel.pelvis is not None:
            p = gt_skel.pelvis
            if math.hypot(p[0], p[1]) > 1e-12:
                g = gt_heading["gaze"]
                offset = planar_angle((math.cos(g), math.sin(g)), -p)
                fov_hits.append(bool(pred_inside) == (offset <= fov_cfg.half_angle))
    if per_frame:
        rep.mpjpe_mean = float(np.mean(per_frame))
    rep.mpjpe_per_joint = {j: float(np.mean(v)) for j, v in sorted(per_joint.items())}
    for name, v in errs.items():
        setattr(rep, name, _stats(v))
    if fov_hits:
        rep.fov_accuracy = float(np.mean(fov_hits))
    rep.fov_count = len(fov_hits)
    return rep


def overlay_frames(results: list[dict], arrow_length: float = 0.5) -> list[dict]:
    """Per-result arrows for external plotting: gaze in red, torso in green."""
    out = []
    for r in results:
        pelvis = r["joints3d"].get("pelvis")
        neck = r["joints3d"].get("neck")
        arrows = []
        for kind, color, origin in (("gaze", "red", neck), ("torso", "green", pelvis)):
            h = r[kind].get("smoothed_heading")
            if h is None or origin is None:
                continue
            arrows.append({
                "kind": kind,
                "color": color,
                "origin": origin,
                "tip": [origin[0] + arrow_length * math.cos(h), origin[1] + arrow_length * math.sin(h), origin[2]],
            })
        out.append({"timestamp": r["timestamp"], "track_id": r["track_id"], "arrows": arrows})
    return out

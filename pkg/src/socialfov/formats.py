"""On-disk formats: recordings, ground truth, and result streams.

Recording directory::

    intrinsics.json        {"fx", "fy", "cx", "cy", "width", "height"}
    frames.jsonl           {"timestamp", "depth_file", "detections": [...]} per line
    depth/NNNNNN.pgm       binary 16-bit PGM (P5, maxval 65535, big-endian), mm

Ground-truth directory::

    gt.jsonl               {"timestamp", "joints": {name: [x, y, z]}, "torso_heading", "gaze_heading"}
    extrinsics.json        {"camera_to_world": 4x4 row-major}

Joint coordinates in ground truth are world-frame meters; headings are
world-frame yaw angles (radians, counterclockwise from world +X).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import (
    BadMagic,
    BadMaxval,
    InputError,
    MalformedLine,
    MissingDepthFile,
    MissingFile,
    NonMonotonicTimestamp,
    TrailingData,
    TruncatedData,
)
from .geometry import CameraIntrinsics
from .skeleton import COCO_JOINTS, DepthFrame, JointId, Keypoint, Skeleton2D

# ---------------------------------------------------------------- PGM16

def encode_pgm16(frame: DepthFrame) -> bytes:
    header = b"P5\n%d %d\n65535\n" % (frame.width, frame.height)
    return header + frame.data.astype(">u2").tobytes()


def decode_pgm16(buf: bytes, timestamp: float = 0.0, name: str = "<bytes>") -> DepthFrame:
    if buf[:2] != b"P5":
        raise BadMagic(f"{name}: expected P5 magic, got {buf[:2]!r}")
    pos = 2
    fields = []
    for _ in range(3):
        if pos >= len(buf) or not buf[pos:pos + 1].isspace():
            raise TruncatedData(f"{name}: malformed header at byte {pos}")
        # header tokens may be separated by whitespace and '#' comments
        while True:
            while pos < len(buf) and buf[pos:pos + 1].isspace():
                pos += 1
            if buf[pos:pos + 1] == b"#":
                nl = buf.find(b"\n", pos)
                if nl < 0:
                    raise TruncatedData(f"{name}: unterminated header comment")
                pos = nl + 1
                continue
            break
        start = pos
        while pos < len(buf) and buf[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise TruncatedData(f"{name}: expected a number in header at byte {start}")
        fields.append(int(buf[start:pos]))
    width, height, maxval = fields
    if maxval != 65535:
        raise BadMaxval(f"{name}: maxval {maxval}, only 65535 (16-bit) is supported")
    if pos >= len(buf) or not buf[pos:pos + 1].isspace():
        raise TruncatedData(f"{name}: missing whitespace after header")
    pos += 1
    need = width * height * 2
    body = buf[pos:]
    if len(body) < need:
        raise TruncatedData(f"{name}: need {need} data bytes, found {len(body)}")
    if len(body) > need:
        raise TrailingData(f"{name}: trailing garbage at byte {pos + need}")
    data = np.frombuffer(body, dtype=">u2").reshape(height, width).astype(np.uint16)
    return DepthFrame(data, timestamp)


def read_pgm16(path, timestamp: float = 0.0) -> DepthFrame:
    path = Path(path)
    try:
        buf = path.read_bytes()
    except FileNotFoundError:
        raise MissingDepthFile(f"depth file not found: {path}") from None
    return decode_pgm16(buf, timestamp, str(path))


def write_pgm16(path, frame: DepthFrame) -> None:
    Path(path).write_bytes(encode_pgm16(frame))


# ---------------------------------------------------------------- JSON helpers


def _dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False, separators=(", ", ": "))


def _read_json(path, what: str):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(f"{what} not found: {path}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedLine(path, e.lineno, f"invalid {what}: {e.msg}") from None


def _iter_jsonl(path) -> Iterator[tuple[int, dict]]:
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(f"not found: {path}") from None
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedLine(path, lineno, f"invalid JSON ({e.msg} at column {e.colno})") from None
            if not isinstance(obj, dict):
                raise MalformedLine(path, lineno, "expected a JSON object")
            yield lineno, obj


def _number(obj, key, path, lineno):
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise MalformedLine(path, lineno, f"field {key!r} must be a finite number")
    return float(v)


def _point(v, path, lineno, what):
    if (
        not isinstance(v, list)
        or len(v) != 3
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
    ):
        raise MalformedLine(path, lineno, f"{what} must be a list of 3 numbers")
    return np.array(v, dtype=float)


def read_intrinsics(path) -> CameraIntrinsics:
    d = _read_json(path, "intrinsics.json")
    try:
        return CameraIntrinsics.from_dict(d)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: bad intrinsics: {e}") from None


def write_intrinsics(path, k: CameraIntrinsics) -> None:
    Path(path).write_text(json.dumps(k.to_dict(), indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------- recordings


def skeleton2d_to_json(s: Skeleton2D) -> dict:
    return {
        "confidence": s.confidence,
        "keypoints": {
            str(j): [kp.u, kp.v, kp.confidence] for j, kp in s.keypoints.items()
        },
    }


def skeleton2d_from_json(d, timestamp: float, path="<json>", lineno=0) -> Skeleton2D:
    if not isinstance(d, dict) or not isinstance(d.get("keypoints"), dict):
        raise MalformedLine(path, lineno, "detection must be an object with 'keypoints'")
    kps = {}
    for name, v in d["keypoints"].items():
        try:
            j = JointId(name)
        except ValueError:
            raise MalformedLine(path, lineno, f"unknown keypoint {name!r}") from None
        if j not in COCO_JOINTS:
            raise MalformedLine(path, lineno, f"{name!r} is derived and cannot be detected")
        if (
            not isinstance(v, list)
            or len(v) != 3
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
        ):
            raise MalformedLine(path, lineno, f"keypoint {name!r} must be [u, v, confidence]")
        kps[j] = Keypoint(float(v[0]), float(v[1]), float(v[2]))
    try:
        return Skeleton2D(kps, timestamp, float(d.get("confidence", 1.0)))
    except (TypeError, ValueError) as e:
        raise MalformedLine(path, lineno, str(e)) from None


@dataclass
class FrameRecord:
    index: int
    timestamp: float
    detections: list[Skeleton2D]
    depth_file: str
    _loader: Callable[[], DepthFrame] | None = field(default=None, repr=False, compare=False)

    def load_depth(self) -> DepthFrame:
        if self._loader is None:
            raise InputError(f"frame {self.index} has no depth source")
        return self._loader()


@dataclass
class Recording:
    intrinsics: CameraIntrinsics
    frames: list[FrameRecord]
    root: Path | None = None

    def __iter__(self) -> Iterator[FrameRecord]:
        return iter(self.frames)

    def __len__(self):
        return len(self.frames)


def depth_name(index: int) -> str:
    return f"depth/{index:06d}.pgm"


def read_recording(path) -> Recording:
    """Parse and validate a recording directory; depth frames load lazily."""
    root = Path(path)
    if not root.is_dir():
        raise MissingFile(f"recording directory not found: {root}")
    k = read_intrinsics(root / "intrinsics.json")
    frames_path = root / "frames.jsonl"
    frames = []
    last_t = None
    for lineno, obj in _iter_jsonl(frames_path):
        t = _number(obj, "timestamp", frames_path, lineno)
        if last_t is not None and not t > last_t:
            raise NonMonotonicTimestamp(
                frames_path, lineno, f"timestamp {t} does not increase (previous {last_t})"
            )
        last_t = t
        dets = obj.get("detections", [])
        if not isinstance(dets, list):
            raise MalformedLine(frames_path, lineno, "'detections' must be a list")
        rel = obj.get("depth_file")
        if not isinstance(rel, str):
            raise MalformedLine(frames_path, lineno, "'depth_file' must be a string")
        depth_path = root / rel
        if not depth_path.is_file():
            raise MissingDepthFile(f"{frames_path}:{lineno}: depth file not found: {rel}")
        skels = [skeleton2d_from_json(d, t, frames_path, lineno) for d in dets]
        frames.append(
            FrameRecord(len(frames), t, skels, rel, _depth_loader(depth_path, t, k))
        )
    return Recording(k, frames, root)


def _depth_loader(path: Path, t: float, k: CameraIntrinsics):
    def load():
        frame = read_pgm16(path, t)
        if (frame.width, frame.height) != (k.width, k.height):
            raise InputError(
                f"{path}: depth is {frame.width}x{frame.height}, intrinsics say {k.width}x{k.height}"
            )
        return frame

    return load


def write_recording(rec: Recording, path) -> Path:
    root = Path(path)
    (root / "depth").mkdir(parents=True, exist_ok=True)
    write_intrinsics(root / "intrinsics.json", rec.intrinsics)
    with open(root / "frames.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for fr in rec.frames:
            write_pgm16(root / fr.depth_file, fr.load_depth())
            line = {
                "timestamp": fr.timestamp,
                "depth_file": fr.depth_file,
                "detections": [skeleton2d_to_json(s) for s in fr.detections],
            }
            fh.write(_dumps(line) + "\n")
    return root


# ---------------------------------------------------------------- ground truth


@dataclass
class GtEntry:
    timestamp: float
    joints: dict[JointId, np.ndarray]
    torso_heading: float | None = None
    gaze_heading: float | None = None


@dataclass
class GroundTruth:
    entries: list[GtEntry]
    camera_to_world: np.ndarray


def read_ground_truth(path) -> GroundTruth:
    root = Path(path)
    ext = _read_json(root / "extrinsics.json", "extrinsics.json")
    try:
        m = np.array(ext["camera_to_world"], dtype=float)
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{root / 'extrinsics.json'}: needs a 4x4 'camera_to_world'") from None
    if m.shape != (4, 4):
        raise InputError(f"{root / 'extrinsics.json'}: camera_to_world must be 4x4")
    gt_path = root / "gt.jsonl"
    entries = []
    last_t = None
    for lineno, obj in _iter_jsonl(gt_path):
        t = _number(obj, "timestamp", gt_path, lineno)
        if last_t is not None and not t > last_t:
            raise NonMonotonicTimestamp(gt_path, lineno, f"timestamp {t} does not increase")
        last_t = t
        joints_obj = obj.get("joints")
        if not isinstance(joints_obj, dict):
            raise MalformedLine(gt_path, lineno, "'joints' must be an object")
        joints = {}
        for name, v in joints_obj.items():
            try:
                j = JointId(name)
            except ValueError:
                raise MalformedLine(gt_path, lineno, f"unknown joint {name!r}") from None
            joints[j] = _point(v, gt_path, lineno, f"joint {name!r}")
        headings = []
        for key in ("torso_heading", "gaze_heading"):
            headings.append(None if obj.get(key) is None else _number(obj, key, gt_path, lineno))
        entries.append(GtEntry(t, joints, *headings))
    return GroundTruth(entries, m)


def write_ground_truth(gt: GroundTruth, path) -> Path:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    (root / "extrinsics.json").write_text(
        json.dumps({"camera_to_world": gt.camera_to_world.tolist()}, indent=2) + "\n",
        encoding="utf-8",
    )
    with open(root / "gt.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for e in gt.entries:
            fh.write(
                _dumps(
                    {
                        "timestamp": e.timestamp,
                        "joints": {str(j): p.tolist() for j, p in e.joints.items()},
                        "torso_heading": e.torso_heading,
                        "gaze_heading": e.gaze_heading,
                    }
                )
                + "\n"
            )
    return root


# ---------------------------------------------------------------- results

RESULT_KEYS = ("timestamp", "track_id", "joints3d", "torso", "gaze", "fov")


def serialize_result(obj: dict) -> str:
    return _dumps(obj)


def parse_result(line: str, path="<results>", lineno=0) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedLine(path, lineno, f"invalid JSON ({e.msg})") from None
    if not isinstance(obj, dict):
        raise MalformedLine(path, lineno, "expected a JSON object")
    missing = [k for k in RESULT_KEYS if k not in obj]
    if missing:
        raise MalformedLine(path, lineno, "missing keys: " + ", ".join(missing))
    return obj


def write_results(results: Iterable[dict], path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for obj in results:
            fh.write(serialize_result(obj) + "\n")
            n += 1
        fh.flush()
    return n


def read_results(path) -> list[dict]:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"results file not found: {path}")
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                out.append(parse_result(line, path, lineno))
    return out


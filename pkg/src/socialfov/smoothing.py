"""Per-person tracks with Kalman-filtered torso and gaze headings.

Each heading gets its own constant-velocity filter on the state
``(theta, omega)``. The innovation is wrapped to (-pi, pi] before the gain is
applied so that headings crossing the +-pi seam are filtered along the short
arc.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import wrap_angle
from .orientation import DirectionEstimate, Kind
from .skeleton import Skeleton3D

DEFAULT_GATE_M = 0.75
DEFAULT_EXPIRY_FRAMES = 30


@dataclass(frozen=True)
class KalmanParams:
    q: float = 0.5  # rad^2/s^3, white-noise angular acceleration
    r: float = 0.1**2  # rad^2
    p0_theta: float = 0.5
    p0_omega: float = 1.0

    def __post_init__(self):
        if self.q < 0 or self.r <= 0 or self.p0_theta < 0 or self.p0_omega < 0:
            raise ValueError(f"invalid Kalman parameters: {self}")


@dataclass(frozen=True)
class HeadingFilter:
    theta: float
    omega: float
    P: np.ndarray
    q: float
    r: float
    last_update: float

    @classmethod
    def initial(cls, heading: float, timestamp: float, params: KalmanParams = KalmanParams()):
        return cls(
            theta=wrap_angle(heading),
            omega=0.0,
            P=np.diag([params.p0_theta, params.p0_omega]),
            q=params.q,
            r=params.r,
            last_update=timestamp,
        )

    @property
    def state(self) -> np.ndarray:
        return np.array([self.theta, self.omega])


def predict(f: HeadingFilter, dt: float) -> HeadingFilter:
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    if dt == 0:
        return f
    F = np.array([[1.0, dt], [0.0, 1.0]])
    Q = f.q * np.array([[dt**3 / 3, dt**2 / 2], [dt**2 / 2, dt]])
    P = F @ f.P @ F.T + Q
    P = 0.5 * (P + P.T)
    return replace(
        f,
        theta=wrap_angle(f.theta + f.omega * dt),
        P=P,
        last_update=f.last_update + dt,
    )


def update(f: HeadingFilter, measured_heading: float) -> HeadingFilter:
    if not math.isfinite(measured_heading):
        raise ValueError("measurement must be finite")
    P = f.P
    innovation = wrap_angle(measured_heading - f.theta)
    s = P[0, 0] + f.r
    K = P[:, 0] / s
    # Joseph form keeps P symmetric positive semidefinite
    A = np.eye(2) - np.outer(K, [1.0, 0.0])
    P = A @ P @ A.T + f.r * np.outer(K, K)
    P = 0.5 * (P + P.T)
    return replace(
        f,
        theta=wrap_angle(f.theta + K[0] * innovation),
        omega=f.omega + K[1] * innovation,
        P=P,
    )


def _advance(f: HeadingFilter | None, est: DirectionEstimate, timestamp: float, params: KalmanParams):
    if f is None:
        if est.valid:
            return HeadingFilter.initial(est.heading, timestamp, params)
        return None
    f = replace(predict(f, timestamp - f.last_update), last_update=timestamp)
    if est.valid:
        f = update(f, est.heading)
    return f


def smoothed_estimate(kind: Kind, f: HeadingFilter | None, raw: DirectionEstimate | None = None):
    if f is None:
        return DirectionEstimate.invalid(kind)
    return DirectionEstimate.from_heading(kind, f.theta, None if raw is None else raw.raw_normal)


@dataclass
class TrackState:
    track_id: int
    last_pelvis: np.ndarray
    torso_filter: HeadingFilter | None = None
    gaze_filter: HeadingFilter | None = None
    frames_since_seen: int = 0
    last_timestamp: float | None = None


def step_track(
    t: TrackState,
    torso: DirectionEstimate,
    gaze: DirectionEstimate,
    timestamp: float,
    params: KalmanParams = KalmanParams(),
) -> tuple[DirectionEstimate, DirectionEstimate]:
    """Advance both filters to ``timestamp`` and fold in the valid measurements.

    Invalid measurements are skipped, so the filter coasts on its prediction.
    Mutates ``t`` and returns the smoothed ``(torso, gaze)`` estimates.
    """
    if t.last_timestamp is not None and timestamp < t.last_timestamp:
        raise ValueError(f"timestamp {timestamp} precedes last update {t.last_timestamp}")
    t.torso_filter = _advance(t.torso_filter, torso, timestamp, params)
    t.gaze_filter = _advance(t.gaze_filter, gaze, timestamp, params)
    t.last_timestamp = timestamp
    return (
        smoothed_estimate(Kind.TORSO, t.torso_filter, torso),
        smoothed_estimate(Kind.GAZE, t.gaze_filter, gaze),
    )


@dataclass
class Association:
    pairs: list[tuple[int, int]] = field(default_factory=list)  # (track index, skeleton index)
    unmatched_tracks: list[int] = field(default_factory=list)
    unmatched_skeletons: list[int] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)  # skeletons without a pelvis


def associate(tracks: list[TrackState], skeletons: list[Skeleton3D], gate: float = DEFAULT_GATE_M) -> Association:
    """Greedy nearest-neighbour matching on pelvis ground-plane distance.

    Candidate pairs are sorted globally by distance (ties by track then
    skeleton index) and accepted while both sides are free and within ``gate``.
    """
    out = Association()
    usable = []
    for i, s in enumerate(skeletons):
        if s.pelvis is None:
            out.skipped.append(i)
        else:
            usable.append(i)
    cands = []
    for ti, t in enumerate(tracks):
        for si in usable:
            d = math.hypot(*(skeletons[si].pelvis[:2] - t.last_pelvis[:2]))
            if d <= gate:
                cands.append((d, ti, si))
    cands.sort()
    used_t, used_s = set(), set()
    for d, ti, si in cands:
        if ti in used_t or si in used_s:
            continue
        used_t.add(ti)
        used_s.add(si)
        out.pairs.append((ti, si))
    out.unmatched_tracks = [ti for ti in range(len(tracks)) if ti not in used_t]
    out.unmatched_skeletons = [si for si in usable if si not in used_s]
    return out


class Tracker:
    """Owns the live tracks of one stream; not shared between threads."""

    def __init__(self, params: KalmanParams = KalmanParams(), gate: float = DEFAULT_GATE_M,
                 expiry_frames: int = DEFAULT_EXPIRY_FRAMES):
        self.params = params
        self.gate = gate
        self.expiry_frames = expiry_frames
        self.tracks: list[TrackState] = []
        self.next_id = 0

    def step(self, skeletons: list[Skeleton3D], estimates, timestamp: float):
        """Associate, age and update tracks for one frame.

        ``estimates[i]`` is the raw ``(torso, gaze)`` pair for ``skeletons[i]``.
        Returns ``(skeleton index, track, smoothed torso, smoothed gaze)`` tuples
        ordered by skeleton index.
        """
        assoc = associate(self.tracks, skeletons, self.gate)
        owner = {si: self.tracks[ti] for ti, si in assoc.pairs}
        for si in assoc.unmatched_skeletons:
            t = TrackState(self.next_id, skeletons[si].pelvis.copy())
            self.next_id += 1
            self.tracks.append(t)
            owner[si] = t
        for ti in assoc.unmatched_tracks:
            self.tracks[ti].frames_since_seen += 1
        out = []
        for si in sorted(owner):
            t = owner[si]
            t.frames_since_seen = 0
            t.last_pelvis = skeletons[si].pelvis.copy()
            torso, gaze = estimates[si]
            st, sg = step_track(t, torso, gaze, timestamp, self.params)
            skeletons[si].track_id = t.track_id
            out.append((si, t, st, sg))
        self.tracks = [t for t in self.tracks if t.frames_since_seen <= self.expiry_frames]
        return out

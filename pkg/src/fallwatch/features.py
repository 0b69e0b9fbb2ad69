"""Per-frame posture and motion indicators computed from pose landmarks.

Geometry conventions: all positions are normalized image coordinates with y
growing downward, so "below" means larger y and the floor sits at large y.
Every feature returns None (UNDEFINED) instead of a value when its landmarks
fail the visibility gate, when the person is absent, or when the geometry is
degenerate. None never fires an indicator downstream.

Side selection: torso features nominally use the left shoulder/hip pair, but
profile views routinely occlude one side, so paired landmarks are averaged
when both pass the visibility gate and the visible side is used otherwise.
With only the left side visible this degenerates to the nominal choice.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace

from .pose_stream import LandmarkIndex, PoseFrame

DEFAULT_VISIBILITY_MIN = 0.5
# Hysteresis margin so head-exactly-at-shoulder-level does not flicker.
ALIGNMENT_EPSILON = 0.02
FLOOR_Y_DEFAULT = 1.0
FLOOR_Y_CAP = 1.5
DEFAULT_WARMUP_FRAMES = 10
_DEGENERATE_NORM = 1e-9

_NOSE = LandmarkIndex.NOSE
_L_SHOULDER = LandmarkIndex.LEFT_SHOULDER
_R_SHOULDER = LandmarkIndex.RIGHT_SHOULDER
_L_HIP = LandmarkIndex.LEFT_HIP
_R_HIP = LandmarkIndex.RIGHT_HIP
_L_KNEE = LandmarkIndex.LEFT_KNEE
_R_KNEE = LandmarkIndex.RIGHT_KNEE
_L_ANKLE = LandmarkIndex.LEFT_ANKLE
_R_ANKLE = LandmarkIndex.RIGHT_ANKLE


class DegenerateVector(ValueError):
    """Angle requested between vectors of (near-)zero length."""


class NonPositiveTimeDelta(ValueError):
    """Two frames share a timestamp; speed is undefined."""


@dataclass(frozen=True)
class Calibration:
    """Warm-up state: the person's standing height and the floor line.

    ``initial_height`` is the median shoulder-hip distance over the first
    ``warmup_frames`` frames that pass the visibility gate. ``floor_y`` is the
    running maximum of visible ankle y, never below its 1.0 (image bottom)
    initialization and capped at FLOOR_Y_CAP.
    """

    initial_height: float = 0.0
    floor_y: float = FLOOR_Y_DEFAULT
    calibrated: bool = False
    frames_seen: int = 0
    height_samples: tuple[float, ...] = ()


@dataclass(frozen=True)
class FeatureVector:
    """The six per-frame indicator measurements; None marks UNDEFINED.

    ``velocity_y`` is the signed vertical component of the hip velocity
    (positive = downward) that accompanies ``speed``; the speed indicator only
    qualifies when the motion is toward the floor.
    """

    height_ratio: float | None
    torso_leg_angle_deg: float | None
    knee_ankle_gap: float | None
    head_floor_distance: float | None
    upper_body_misaligned: bool | None
    speed: float | None
    velocity_y: float | None


EMPTY_FEATURES = FeatureVector(None, None, None, None, None, None, None)


def angle_between(v1: tuple[float, float], v2: tuple[float, float]) -> float:
    """Angle between two 2D vectors in degrees, in [0, 180].

    Raises DegenerateVector when either vector's norm is <= 1e-9 (coincident
    landmarks); callers map that to UNDEFINED.
    """
    n1 = math.hypot(v1[0], v1[1])
    n2 = math.hypot(v2[0], v2[1])
    if n1 <= _DEGENERATE_NORM or n2 <= _DEGENERATE_NORM:
        raise DegenerateVector(f"vector norms {n1:.3g}, {n2:.3g}")
    cos = (v1[0] * v2[0] + v1[1] * v2[1]) / (n1 * n2)
    cos = max(-1.0, min(1.0, cos))
    return math.degrees(math.acos(cos))


def _paired_point(
    frame: PoseFrame,
    left: LandmarkIndex,
    right: LandmarkIndex,
    visibility_min: float,
) -> tuple[float, float] | None:
    """Average of a left/right landmark pair, or the visible side, or None."""
    lm_left = frame.landmarks[left]
    lm_right = frame.landmarks[right]
    left_ok = lm_left.visibility >= visibility_min
    right_ok = lm_right.visibility >= visibility_min
    if left_ok and right_ok:
        return ((lm_left.x + lm_right.x) / 2.0, (lm_left.y + lm_right.y) / 2.0)
    if left_ok:
        return (lm_left.x, lm_left.y)
    if right_ok:
        return (lm_right.x, lm_right.y)
    return None


def update_calibration(
    cal: Calibration,
    frame: PoseFrame,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
    warmup_frames: int = DEFAULT_WARMUP_FRAMES,
) -> Calibration:
    """Advance calibration with one frame; pure, returns a new Calibration.

    Frames lacking visible landmarks simply do not advance the warm-up.
    floor_y only ever grows (running max), so it is monotone over a stream.
    """
    floor_y = cal.floor_y
    for index in (_L_ANKLE, _R_ANKLE):
        lm = frame.landmarks[index]
        if lm.visibility >= visibility_min and lm.y > floor_y:
            floor_y = min(lm.y, FLOOR_Y_CAP)

    if cal.calibrated:
        if floor_y != cal.floor_y:
            return replace(cal, floor_y=floor_y)
        return cal

    shoulder = _paired_point(frame, _L_SHOULDER, _R_SHOULDER, visibility_min)
    hip = _paired_point(frame, _L_HIP, _R_HIP, visibility_min)
    if shoulder is None or hip is None:
        if floor_y != cal.floor_y:
            return replace(cal, floor_y=floor_y)
        return cal

    height = math.dist(shoulder, hip)
    if height <= _DEGENERATE_NORM:
        # A zero-length torso sample would poison the median.
        if floor_y != cal.floor_y:
            return replace(cal, floor_y=floor_y)
        return cal

    samples = cal.height_samples + (height,)
    frames_seen = cal.frames_seen + 1
    if frames_seen >= warmup_frames:
        return Calibration(
            initial_height=statistics.median(samples),
            floor_y=floor_y,
            calibrated=True,
            frames_seen=frames_seen,
            height_samples=samples,
        )
    return Calibration(
        initial_height=cal.initial_height,
        floor_y=floor_y,
        calibrated=False,
        frames_seen=frames_seen,
        height_samples=samples,
    )


def height_ratio(
    frame: PoseFrame,
    cal: Calibration,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
) -> float | None:
    """Current shoulder-hip distance over the calibrated initial height."""
    if not cal.calibrated:
        return None
    shoulder = _paired_point(frame, _L_SHOULDER, _R_SHOULDER, visibility_min)
    hip = _paired_point(frame, _L_HIP, _R_HIP, visibility_min)
    if shoulder is None or hip is None:
        return None
    distance = math.dist(shoulder, hip)
    if distance <= _DEGENERATE_NORM:
        # Coincident shoulder/hip is a measurement glitch, not a zero height.
        return None
    return distance / cal.initial_height


def torso_leg_angle(
    frame: PoseFrame,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
) -> float | None:
    """Angle at the hip between hip->shoulder and hip->knee, degrees.

    An upright stance is ~180 degrees (torso and thigh point opposite ways in
    image space); a body folded at the hip reads ~90.
    """
    shoulder = _paired_point(frame, _L_SHOULDER, _R_SHOULDER, visibility_min)
    hip = _paired_point(frame, _L_HIP, _R_HIP, visibility_min)
    knee = _paired_point(frame, _L_KNEE, _R_KNEE, visibility_min)
    if shoulder is None or hip is None or knee is None:
        return None
    try:
        return angle_between(
            (shoulder[0] - hip[0], shoulder[1] - hip[1]),
            (knee[0] - hip[0], knee[1] - hip[1]),
        )
    except DegenerateVector:
        return None


def knee_ankle_gap(
    frame: PoseFrame,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
) -> float | None:
    """Vertical distance between knee and ankle; near zero when collapsed."""
    knee = _paired_point(frame, _L_KNEE, _R_KNEE, visibility_min)
    ankle = _paired_point(frame, _L_ANKLE, _R_ANKLE, visibility_min)
    if knee is None or ankle is None:
        return None
    return abs(knee[1] - ankle[1])


def head_floor_distance(
    frame: PoseFrame,
    cal: Calibration,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
) -> float | None:
    """Vertical distance from the nose down to the floor line, clamped at 0."""
    nose = frame.landmarks[_NOSE]
    if nose.visibility < visibility_min:
        return None
    return max(0.0, cal.floor_y - nose.y)


def upper_body_misaligned(
    frame: PoseFrame,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
    epsilon: float = ALIGNMENT_EPSILON,
) -> bool | None:
    """True when the head is not above the shoulders.

    In image coordinates (y down) an upright head sits at smaller y than the
    shoulder midpoint; once nose y reaches the shoulder line (minus a small
    hysteresis margin) the upper body has tipped over.
    """
    nose = frame.landmarks[_NOSE]
    lm_left = frame.landmarks[_L_SHOULDER]
    lm_right = frame.landmarks[_R_SHOULDER]
    if (
        nose.visibility < visibility_min
        or lm_left.visibility < visibility_min
        or lm_right.visibility < visibility_min
    ):
        return None
    shoulder_mid_y = (lm_left.y + lm_right.y) / 2.0
    return nose.y >= shoulder_mid_y - epsilon


def _hip_motion(
    curr: PoseFrame,
    prev: PoseFrame,
    visibility_min: float,
) -> tuple[float, float, float] | None:
    """(dx, dy, dt) of the hip point between frames, or None on a gate failure."""
    hip_now = _paired_point(curr, _L_HIP, _R_HIP, visibility_min)
    hip_before = _paired_point(prev, _L_HIP, _R_HIP, visibility_min)
    if hip_now is None or hip_before is None:
        return None
    return (
        hip_now[0] - hip_before[0],
        hip_now[1] - hip_before[1],
        curr.timestamp_s - prev.timestamp_s,
    )


def movement_speed(
    curr: PoseFrame,
    prev: PoseFrame,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
) -> float | None:
    """Hip speed between consecutive frames, normalized units per second.

    Raises NonPositiveTimeDelta when the producer emitted dt <= 0; callers
    map that to UNDEFINED.
    """
    motion = _hip_motion(curr, prev, visibility_min)
    if motion is None:
        return None
    dx, dy, dt = motion
    if dt <= 0:
        raise NonPositiveTimeDelta(f"dt = {dt}")
    return math.hypot(dx, dy) / dt


def extract_features(
    curr: PoseFrame,
    prev: PoseFrame | None,
    cal: Calibration,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
) -> FeatureVector:
    """Assemble the full FeatureVector for one frame. Pure in its inputs."""
    speed: float | None = None
    velocity_y: float | None = None
    if prev is not None:
        motion = _hip_motion(curr, prev, visibility_min)
        if motion is not None:
            dx, dy, dt = motion
            if dt > 0:
                speed = math.hypot(dx, dy) / dt
                velocity_y = dy / dt

    return FeatureVector(
        height_ratio=height_ratio(curr, cal, visibility_min),
        torso_leg_angle_deg=torso_leg_angle(curr, visibility_min),
        knee_ankle_gap=knee_ankle_gap(curr, visibility_min),
        head_floor_distance=head_floor_distance(curr, cal, visibility_min),
        upper_body_misaligned=upper_body_misaligned(curr, visibility_min),
        speed=speed,
        velocity_y=velocity_y,
    )

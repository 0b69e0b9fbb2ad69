"""Hand-scripted landmark trajectories: fixtures, demos, and benchmark input.

Each script is a short clip of 33-landmark frames built from a handful of
keypoint postures. The postures are designed against the default thresholds
with wide margins so the intended outcome of every clip is derivable by hand:

* standing fires no indicator at all;
* every fall script settles into a pose that sustains at least four
  indicators (the bent side-lying pose fires torso angle, knee-ankle,
  head-floor, and alignment; the foreshortened poses trade torso angle for
  height ratio), long enough to pass the persistence window;
* every daily-living script peaks at two concurrently firing indicators
  (sitting and crouching fire the torso angle alone, bending adds head
  alignment), or fires briefly enough that the persistence window never
  fills (stumble-and-recover, walking, leaving the frame).

Streams are deterministic: jitter comes from a per-script seeded RNG.
"""

from __future__ import annotations

import json
import math
import random
import zlib
from pathlib import Path
from typing import Callable, Iterator

from .pose_stream import (
    ADL_LABEL,
    FALL_LABEL,
    NUM_LANDMARKS,
    Landmark,
    LandmarkIndex,
    PoseFrame,
    write_stream_path,
)

FPS = 30.0
KEY_VISIBILITY = 0.95
FILLER_VISIBILITY = 0.9
JITTER = 0.002

Pose = dict[str, tuple[float, float]]

POSE_KEYS = (
    "nose",
    "left_shoulder",
    "right_shoulder",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
)

STANDING: Pose = {
    "nose": (0.50, 0.15),
    "left_shoulder": (0.55, 0.30),
    "right_shoulder": (0.45, 0.30),
    "left_hip": (0.54, 0.55),
    "right_hip": (0.46, 0.55),
    "left_knee": (0.54, 0.75),
    "right_knee": (0.46, 0.75),
    "left_ankle": (0.53, 0.95),
    "right_ankle": (0.47, 0.95),
}

# Side-lying with knees drawn up: torso horizontal, head on the floor line.
LYING_BENT: Pose = {
    "nose": (0.24, 0.92),
    "left_shoulder": (0.30, 0.925),
    "right_shoulder": (0.30, 0.935),
    "left_hip": (0.50, 0.935),
    "right_hip": (0.50, 0.945),
    "left_knee": (0.52, 0.795),
    "right_knee": (0.52, 0.805),
    "left_ankle": (0.40, 0.815),
    "right_ankle": (0.40, 0.825),
}

# Collapsed toward the camera: the shoulder-hip segment foreshortens hard.
CRUMPLED: Pose = {
    "nose": (0.50, 0.88),
    "left_shoulder": (0.54, 0.84),
    "right_shoulder": (0.46, 0.84),
    "left_hip": (0.53, 0.92),
    "right_hip": (0.47, 0.92),
    "left_knee": (0.56, 0.90),
    "right_knee": (0.44, 0.90),
    "left_ankle": (0.57, 0.91),
    "right_ankle": (0.43, 0.91),
}

# Flat on the back, feet toward the camera; torso foreshortened, legs too.
SUPINE: Pose = {
    "nose": (0.50, 0.87),
    "left_shoulder": (0.55, 0.80),
    "right_shoulder": (0.45, 0.80),
    "left_hip": (0.54, 0.88),
    "right_hip": (0.46, 0.88),
    "left_knee": (0.55, 0.93),
    "right_knee": (0.45, 0.93),
    "left_ankle": (0.56, 0.95),
    "right_ankle": (0.44, 0.95),
}

SITTING: Pose = {
    "nose": (0.50, 0.27),
    "left_shoulder": (0.55, 0.35),
    "right_shoulder": (0.45, 0.35),
    "left_hip": (0.54, 0.60),
    "right_hip": (0.46, 0.60),
    "left_knee": (0.65, 0.615),
    "right_knee": (0.65, 0.625),
    "left_ankle": (0.66, 0.895),
    "right_ankle": (0.66, 0.905),
}

BENDING: Pose = {
    "nose": (0.72, 0.60),
    "left_shoulder": (0.64, 0.565),
    "right_shoulder": (0.64, 0.575),
    "left_hip": (0.48, 0.545),
    "right_hip": (0.48, 0.555),
    "left_knee": (0.48, 0.745),
    "right_knee": (0.48, 0.755),
    "left_ankle": (0.48, 0.945),
    "right_ankle": (0.48, 0.955),
}

CROUCHING: Pose = {
    "nose": (0.50, 0.48),
    "left_shoulder": (0.55, 0.55),
    "right_shoulder": (0.45, 0.55),
    "left_hip": (0.54, 0.78),
    "right_hip": (0.46, 0.78),
    "left_knee": (0.62, 0.795),
    "right_knee": (0.62, 0.805),
    "left_ankle": (0.60, 0.925),
    "right_ankle": (0.60, 0.935),
}

# Mid-stumble nadir: tipped ~45 degrees, caught before going down.
HALF_DOWN: Pose = {
    "nose": (0.34, 0.64),
    "left_shoulder": (0.38, 0.635),
    "right_shoulder": (0.38, 0.645),
    "left_hip": (0.52, 0.715),
    "right_hip": (0.52, 0.725),
    "left_knee": (0.48, 0.825),
    "right_knee": (0.48, 0.835),
    "left_ankle": (0.54, 0.945),
    "right_ankle": (0.54, 0.955),
}


def blend_pose(a: Pose, b: Pose, alpha: float) -> Pose:
    return {
        key: (
            a[key][0] + (b[key][0] - a[key][0]) * alpha,
            a[key][1] + (b[key][1] - a[key][1]) * alpha,
        )
        for key in POSE_KEYS
    }


def mirror_pose(pose: Pose) -> Pose:
    return {key: (1.0 - x, y) for key, (x, y) in pose.items()}


def shift_pose(pose: Pose, dx: float, dy: float = 0.0) -> Pose:
    return {key: (x + dx, y + dy) for key, (x, y) in pose.items()}


def _lerp(a: tuple[float, float], b: tuple[float, float], f: float) -> tuple[float, float]:
    return (a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f)


def make_frame(
    frame_index: int,
    timestamp_s: float,
    pose: Pose,
    visibility: float = KEY_VISIBILITY,
) -> PoseFrame:
    """Expand a 9-keypoint posture into a full 33-landmark frame.

    The 24 slots the detector never reads (face detail, arms, feet) are
    placed at plausible offsets from the scripted keypoints so streams look
    like a body rather than a 9-point cloud.
    """
    idx = LandmarkIndex
    points: dict[int, tuple[float, float, float]] = {}

    def put(index: LandmarkIndex, x: float, y: float, vis: float = FILLER_VISIBILITY) -> None:
        points[index] = (x, y, vis)

    nose = pose["nose"]
    l_sh, r_sh = pose["left_shoulder"], pose["right_shoulder"]
    l_hip, r_hip = pose["left_hip"], pose["right_hip"]
    l_knee, r_knee = pose["left_knee"], pose["right_knee"]
    l_ank, r_ank = pose["left_ankle"], pose["right_ankle"]

    put(idx.NOSE, nose[0], nose[1], visibility)
    # Face cluster hangs off the nose.
    put(idx.LEFT_EYE_INNER, nose[0] + 0.01, nose[1] - 0.01)
    put(idx.LEFT_EYE, nose[0] + 0.015, nose[1] - 0.01)
    put(idx.LEFT_EYE_OUTER, nose[0] + 0.02, nose[1] - 0.01)
    put(idx.RIGHT_EYE_INNER, nose[0] - 0.01, nose[1] - 0.01)
    put(idx.RIGHT_EYE, nose[0] - 0.015, nose[1] - 0.01)
    put(idx.RIGHT_EYE_OUTER, nose[0] - 0.02, nose[1] - 0.01)
    put(idx.LEFT_EAR, nose[0] + 0.03, nose[1])
    put(idx.RIGHT_EAR, nose[0] - 0.03, nose[1])
    put(idx.MOUTH_LEFT, nose[0] + 0.01, nose[1] + 0.015)
    put(idx.MOUTH_RIGHT, nose[0] - 0.01, nose[1] + 0.015)

    put(idx.LEFT_SHOULDER, l_sh[0], l_sh[1], visibility)
    put(idx.RIGHT_SHOULDER, r_sh[0], r_sh[1], visibility)
    # Arms hang along the torso.
    for side, shoulder, hip in (("L", l_sh, l_hip), ("R", r_sh, r_hip)):
        sign = 1.0 if side == "L" else -1.0
        elbow = _lerp(shoulder, hip, 0.5)
        wrist = _lerp(shoulder, hip, 0.9)
        if side == "L":
            put(idx.LEFT_ELBOW, elbow[0] + 0.02 * sign, elbow[1])
            put(idx.LEFT_WRIST, wrist[0] + 0.03 * sign, wrist[1])
            put(idx.LEFT_PINKY, wrist[0] + 0.04 * sign, wrist[1] + 0.01)
            put(idx.LEFT_INDEX, wrist[0] + 0.045 * sign, wrist[1] + 0.005)
            put(idx.LEFT_THUMB, wrist[0] + 0.035 * sign, wrist[1])
        else:
            put(idx.RIGHT_ELBOW, elbow[0] + 0.02 * sign, elbow[1])
            put(idx.RIGHT_WRIST, wrist[0] + 0.03 * sign, wrist[1])
            put(idx.RIGHT_PINKY, wrist[0] + 0.04 * sign, wrist[1] + 0.01)
            put(idx.RIGHT_INDEX, wrist[0] + 0.045 * sign, wrist[1] + 0.005)
            put(idx.RIGHT_THUMB, wrist[0] + 0.035 * sign, wrist[1])

    put(idx.LEFT_HIP, l_hip[0], l_hip[1], visibility)
    put(idx.RIGHT_HIP, r_hip[0], r_hip[1], visibility)
    put(idx.LEFT_KNEE, l_knee[0], l_knee[1], visibility)
    put(idx.RIGHT_KNEE, r_knee[0], r_knee[1], visibility)
    put(idx.LEFT_ANKLE, l_ank[0], l_ank[1], visibility)
    put(idx.RIGHT_ANKLE, r_ank[0], r_ank[1], visibility)
    put(idx.LEFT_HEEL, l_ank[0] - 0.01, l_ank[1] + 0.005)
    put(idx.RIGHT_HEEL, r_ank[0] - 0.01, r_ank[1] + 0.005)
    put(idx.LEFT_FOOT_INDEX, l_ank[0] + 0.02, l_ank[1] + 0.005)
    put(idx.RIGHT_FOOT_INDEX, r_ank[0] + 0.02, r_ank[1] + 0.005)

    landmarks = tuple(
        Landmark(points[i][0], points[i][1], 0.0, points[i][2]) for i in range(NUM_LANDMARKS)
    )
    return PoseFrame(
        frame_index=frame_index,
        timestamp_s=timestamp_s,
        landmarks=landmarks,
        person_present=True,
    )


def absent_frame(frame_index: int, timestamp_s: float) -> PoseFrame:
    from .pose_stream import ABSENT_LANDMARKS

    return PoseFrame(
        frame_index=frame_index,
        timestamp_s=timestamp_s,
        landmarks=ABSENT_LANDMARKS,
        person_present=False,
    )


def hold(pose: Pose, n: int) -> list[Pose | None]:
    return [pose] * n


def blend(a: Pose, b: Pose, n: int) -> list[Pose | None]:
    """n intermediate poses strictly between a and b."""
    return [blend_pose(a, b, (i + 1) / (n + 1)) for i in range(n)]


def absent(n: int) -> list[Pose | None]:
    return [None] * n


def _jittered(pose: Pose, rng: random.Random, amplitude: float) -> Pose:
    if amplitude == 0.0:
        return pose
    return {
        key: (
            x + rng.uniform(-amplitude, amplitude),
            y + rng.uniform(-amplitude, amplitude),
        )
        for key, (x, y) in pose.items()
    }


def frames_from_poses(
    poses: list[Pose | None],
    fps: float = FPS,
    seed: int = 0,
    jitter: float = 0.0,
) -> list[PoseFrame]:
    """Materialize a pose-per-frame plan into PoseFrames (None = absent)."""
    rng = random.Random(seed)
    frames: list[PoseFrame] = []
    for i, pose in enumerate(poses):
        t = i / fps
        if pose is None:
            frames.append(absent_frame(i, t))
        else:
            frames.append(make_frame(i, t, _jittered(pose, rng, jitter)))
    return frames


def _seed_for(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def _build(name: str, plan: list[Pose | None], jitter: float = JITTER) -> list[PoseFrame]:
    return frames_from_poses(plan, fps=FPS, seed=_seed_for(name), jitter=jitter)


def fall_side() -> list[PoseFrame]:
    """Stand, then topple sideways into the bent side-lying pose."""
    plan = hold(STANDING, 30) + blend(STANDING, LYING_BENT, 5) + hold(LYING_BENT, 55)
    return _build("fall_side", plan)


def fall_crumple() -> list[PoseFrame]:
    """Legs give way; the body collapses straight down toward the camera."""
    plan = hold(STANDING, 28) + blend(STANDING, CRUMPLED, 4) + hold(CRUMPLED, 58)
    return _build("fall_crumple", plan)


def fall_backward() -> list[PoseFrame]:
    """Backward fall onto the back, feet toward the camera."""
    plan = hold(STANDING, 30) + blend(STANDING, SUPINE, 6) + hold(SUPINE, 54)
    return _build("fall_backward", plan)


def fall_trip() -> list[PoseFrame]:
    """Very fast trip, landing mirrored to the side-lying pose."""
    landing = mirror_pose(LYING_BENT)
    plan = hold(STANDING, 25) + blend(STANDING, landing, 2) + hold(landing, 63)
    return _build("fall_trip", plan)


def fall_from_sit() -> list[PoseFrame]:
    """Sit down first, then slump sideways out of the chair."""
    plan = (
        hold(STANDING, 15)
        + blend(STANDING, SITTING, 5)
        + hold(SITTING, 20)
        + blend(SITTING, LYING_BENT, 3)
        + hold(LYING_BENT, 47)
    )
    return _build("fall_from_sit", plan)


def fall_occluded() -> list[PoseFrame]:
    """A fall with a short detection dropout right after impact."""
    plan = (
        hold(STANDING, 30)
        + blend(STANDING, LYING_BENT, 4)
        + hold(LYING_BENT, 4)
        + absent(4)
        + hold(LYING_BENT, 48)
    )
    return _build("fall_occluded", plan)


def adl_sit() -> list[PoseFrame]:
    """Sit down and stay seated."""
    plan = hold(STANDING, 20) + blend(STANDING, SITTING, 5) + hold(SITTING, 65)
    return _build("adl_sit", plan)


def adl_bend() -> list[PoseFrame]:
    """Bend over to pick something up, then straighten again."""
    plan = (
        hold(STANDING, 25)
        + blend(STANDING, BENDING, 5)
        + hold(BENDING, 25)
        + blend(BENDING, STANDING, 5)
        + hold(STANDING, 30)
    )
    return _build("adl_bend", plan)


def adl_walk() -> list[PoseFrame]:
    """Stroll across the frame with lateral sway."""
    plan: list[Pose | None] = []
    for i in range(90):
        sway = 0.03 * math.sin(2.0 * math.pi * i / 45.0)
        drift = 0.002 * i
        plan.append(shift_pose(STANDING, sway + drift))
    return _build("adl_walk", plan)


def adl_crouch() -> list[PoseFrame]:
    """Deep crouch, hold, and rise again."""
    plan = (
        hold(STANDING, 25)
        + blend(STANDING, CROUCHING, 6)
        + hold(CROUCHING, 28)
        + blend(CROUCHING, STANDING, 6)
        + hold(STANDING, 25)
    )
    return _build("adl_crouch", plan)


def adl_stumble() -> list[PoseFrame]:
    """Brief loss of balance, caught and recovered within a few frames."""
    plan = (
        hold(STANDING, 35)
        + blend(STANDING, HALF_DOWN, 2)
        + hold(HALF_DOWN, 4)
        + blend(HALF_DOWN, STANDING, 4)
        + hold(STANDING, 45)
    )
    return _build("adl_stumble", plan)


def adl_exit() -> list[PoseFrame]:
    """Walk out of view; the stream keeps running with nobody in frame."""
    plan = hold(STANDING, 40) + absent(50)
    return _build("adl_exit", plan)


FALL_SCRIPTS: dict[str, Callable[[], list[PoseFrame]]] = {
    "fall_side": fall_side,
    "fall_crumple": fall_crumple,
    "fall_backward": fall_backward,
    "fall_trip": fall_trip,
    "fall_from_sit": fall_from_sit,
    "fall_occluded": fall_occluded,
}

ADL_SCRIPTS: dict[str, Callable[[], list[PoseFrame]]] = {
    "adl_sit": adl_sit,
    "adl_bend": adl_bend,
    "adl_walk": adl_walk,
    "adl_crouch": adl_crouch,
    "adl_stumble": adl_stumble,
    "adl_exit": adl_exit,
}

ALL_SCRIPTS: dict[str, Callable[[], list[PoseFrame]]] = {**FALL_SCRIPTS, **ADL_SCRIPTS}


def write_fixture_suite(directory: str | Path) -> Path:
    """Write every scripted clip plus a manifest; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = []
    for name, script in ALL_SCRIPTS.items():
        stream_name = f"{name}.jsonl"
        write_stream_path(directory / stream_name, script())
        manifest.append(
            {
                "clip_id": name,
                "path": stream_name,
                "label": FALL_LABEL if name in FALL_SCRIPTS else ADL_LABEL,
                "fps": FPS,
            }
        )
    manifest_path = directory / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest_path


def benchmark_frames(n_frames: int, fps: float = FPS) -> Iterator[PoseFrame]:
    """Endless-walk stream for throughput measurements; deterministic."""
    rng = random.Random(99)
    for i in range(n_frames):
        sway = 0.03 * math.sin(2.0 * math.pi * i / 45.0)
        pose = _jittered(shift_pose(STANDING, sway), rng, JITTER)
        yield make_frame(i, i / fps, pose)

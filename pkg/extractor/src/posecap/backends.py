"""Pose model adapters.

A backend owes the extractor exactly one thing per frame: 33 landmarks, or
None when nobody is in the picture. MediaPipe is the intended model. The
stub backend fabricates a plausible standing figure without looking at the
pixels, so the decode-serialize-consume pipeline can run and be tested on
machines where no model is installed. Do not point it at real footage and
believe the output.
"""

from __future__ import annotations

import math
from typing import Protocol, Sequence

NUM_LANDMARKS = 33

Landmarks = Sequence[tuple[float, float, float, float]]

BACKENDS = ("mediapipe", "stub")


class ModelUnavailable(RuntimeError):
    """The requested pose backend cannot run in this environment."""


class PoseBackend(Protocol):
    def detect(self, frame_bgr) -> Landmarks | None:
        """Landmarks for one frame, or None when no person is found."""
        ...

    def close(self) -> None: ...


class MediaPipePoseBackend:
    """Single-person landmark inference via MediaPipe Pose."""

    def __init__(self, min_confidence: float = 0.5, model_complexity: int = 1):
        try:
            import mediapipe as mp
        except ImportError as exc:
            raise ModelUnavailable(
                "mediapipe is not installed; pip install 'posecap[pose]', "
                "or use --backend stub for a model-free dry run"
            ) from exc
        self._pose = mp.solutions.pose.Pose(
            static_image_mode=False,
            model_complexity=model_complexity,
            min_detection_confidence=min_confidence,
            min_tracking_confidence=min_confidence,
        )

    def detect(self, frame_bgr) -> Landmarks | None:
        import cv2

        result = self._pose.process(cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2RGB))
        if result.pose_landmarks is None:
            return None
        return [(p.x, p.y, p.z, p.visibility) for p in result.pose_landmarks.landmark]

    def close(self) -> None:
        self._pose.close()


# Standing figure in the standard 33-point topology: face 0-10, arms 11-22,
# legs 23-32. Normalized image coordinates, y down.
_STANDING: tuple[tuple[float, float], ...] = (
    (0.50, 0.20),                                   # nose
    (0.52, 0.18), (0.53, 0.18), (0.54, 0.18),       # left eye inner/center/outer
    (0.48, 0.18), (0.47, 0.18), (0.46, 0.18),       # right eye inner/center/outer
    (0.56, 0.19), (0.44, 0.19),                     # ears
    (0.52, 0.22), (0.48, 0.22),                     # mouth corners
    (0.56, 0.32), (0.44, 0.32),                     # shoulders
    (0.58, 0.44), (0.42, 0.44),                     # elbows
    (0.59, 0.55), (0.41, 0.55),                     # wrists
    (0.60, 0.58), (0.40, 0.58),                     # pinkies
    (0.60, 0.57), (0.40, 0.57),                     # index fingers
    (0.59, 0.56), (0.41, 0.56),                     # thumbs
    (0.53, 0.57), (0.47, 0.57),                     # hips
    (0.53, 0.76), (0.47, 0.76),                     # knees
    (0.53, 0.94), (0.47, 0.94),                     # ankles
    (0.54, 0.97), (0.46, 0.97),                     # heels
    (0.52, 0.99), (0.48, 0.99),                     # foot tips
)


class StubPoseBackend:
    """Deterministic placeholder landmarks, one swaying figure per stream."""

    def __init__(self):
        self._ticks = 0

    def detect(self, frame_bgr) -> Landmarks:
        sway = 0.01 * math.sin(self._ticks / 10.0)
        self._ticks += 1
        return [(x + sway, y, 0.0, 0.95) for x, y in _STANDING]

    def close(self) -> None:
        pass


def make_backend(name: str, min_confidence: float) -> PoseBackend:
    if name == "mediapipe":
        return MediaPipePoseBackend(min_confidence=min_confidence)
    if name == "stub":
        return StubPoseBackend()
    raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")

"""posecap: video to pose-landmark JSONL streams."""

from .backends import (
    BACKENDS,
    MediaPipePoseBackend,
    ModelUnavailable,
    PoseBackend,
    StubPoseBackend,
    make_backend,
)
from .extract import ExtractionJob, UndecodableVideo, extract_landmarks

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "ExtractionJob",
    "MediaPipePoseBackend",
    "ModelUnavailable",
    "PoseBackend",
    "StubPoseBackend",
    "UndecodableVideo",
    "extract_landmarks",
    "make_backend",
]

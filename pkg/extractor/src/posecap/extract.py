"""Video decoding and landmark stream serialization.

Writes the wire format the downstream detector reads: one JSON object per
decoded frame, `{"frame", "t", "present", "landmarks"}`, landmarks as 33
[x, y, z, visibility] rows, all zeros when nobody is visible. This module
is deliberately a thin adapter; smoothing, features, and decisions all live
downstream so they stay testable without any pose model.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import cv2

from .backends import BACKENDS, NUM_LANDMARKS, PoseBackend, make_backend

FALLBACK_FPS = 30.0

_ABSENT_ROWS = [[0.0, 0.0, 0.0, 0.0]] * NUM_LANDMARKS


class UndecodableVideo(ValueError):
    """The input cannot be opened as video, or yields no frames."""


@dataclass(frozen=True)
class ExtractionJob:
    """One video in, one landmark stream out."""

    input_path: str | Path
    output_path: str | Path
    min_confidence: float = 0.5
    backend: str = "mediapipe"

    def __post_init__(self):
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError(f"min_confidence must be in [0, 1], got {self.min_confidence}")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")


def _timestamp(pos_msec: float, frame_index: int, fps: float) -> float:
    # Containers that do not report frame timing return 0 for every frame;
    # fall back to counting so t still spans the clip.
    if pos_msec > 0.0:
        return pos_msec / 1000.0
    if frame_index == 0:
        return 0.0
    return frame_index / fps


def _record(frame_index: int, t: float, landmarks) -> str:
    present = landmarks is not None
    rows = [[p[0], p[1], p[2], p[3]] for p in landmarks] if present else _ABSENT_ROWS
    return json.dumps(
        {"frame": frame_index, "t": t, "present": present, "landmarks": rows},
        separators=(",", ":"),
    )


def extract_landmarks(job: ExtractionJob, backend: PoseBackend | None = None) -> int:
    """Run one job; returns the number of frames written.

    The first frame is probed before the output file is opened or a model
    is loaded, so undecodable input leaves nothing behind.
    """
    capture = cv2.VideoCapture(str(job.input_path))
    try:
        if not capture.isOpened():
            raise UndecodableVideo(f"cannot open {job.input_path} as video")
        fps = capture.get(cv2.CAP_PROP_FPS)
        if not math.isfinite(fps) or fps <= 0.0:
            fps = FALLBACK_FPS

        # CAP_PROP_POS_MSEC reports the timestamp of the frame the next
        # read() will return, so it is sampled before each read.
        pos_msec = capture.get(cv2.CAP_PROP_POS_MSEC)
        ok, frame = capture.read()
        if not ok:
            raise UndecodableVideo(f"no decodable frames in {job.input_path}")

        owns_backend = backend is None
        if owns_backend:
            backend = make_backend(job.backend, job.min_confidence)
        count = 0
        try:
            with open(job.output_path, "w", encoding="utf-8") as sink:
                while ok:
                    landmarks = backend.detect(frame)
                    if landmarks is not None and len(landmarks) != NUM_LANDMARKS:
                        raise ValueError(
                            f"backend returned {len(landmarks)} landmarks,"
                            f" expected {NUM_LANDMARKS}"
                        )
                    sink.write(_record(count, _timestamp(pos_msec, count, fps), landmarks))
                    sink.write("\n")
                    count += 1
                    pos_msec = capture.get(cv2.CAP_PROP_POS_MSEC)
                    ok, frame = capture.read()
        finally:
            if owns_backend:
                backend.close()
        return count
    finally:
        capture.release()

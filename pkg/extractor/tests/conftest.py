from __future__ import annotations

import cv2
import numpy as np
import pytest


def write_video(path, n_frames, fps=30.0, size=(64, 48)):
    """A tiny MJPG clip with a rectangle drifting across it."""
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, size)
    assert writer.isOpened(), "VideoWriter refused MJPG/AVI"
    width, height = size
    for k in range(n_frames):
        frame = np.zeros((height, width, 3), dtype=np.uint8)
        x = (3 * k) % (width - 8)
        frame[10:30, x : x + 8] = (40, 200, 40)
        writer.write(frame)
    writer.release()
    return path


@pytest.fixture(scope="session")
def sample_video(tmp_path_factory):
    return write_video(tmp_path_factory.mktemp("video") / "sample.avi", 60)


def person(shift=0.0):
    """A valid 33-landmark detection, optionally shifted in x."""
    return [(0.4 + shift + 0.005 * i, 0.1 + 0.025 * i, 0.0, 0.9) for i in range(33)]


class ScriptedBackend:
    """Replays a preset schedule of detections; the last entry repeats."""

    def __init__(self, schedule):
        self.schedule = list(schedule)
        self.calls = 0
        self.closed = False

    def detect(self, frame_bgr):
        outcome = self.schedule[min(self.calls, len(self.schedule) - 1)]
        self.calls += 1
        return outcome

    def close(self):
        self.closed = True

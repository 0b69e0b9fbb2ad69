"""Shared fixtures and frame-building helpers for the test suite."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from fallwatch.pose_stream import (
    ABSENT_LANDMARKS,
    NUM_LANDMARKS,
    Landmark,
    LandmarkIndex,
    PoseFrame,
)
from fallwatch.synthetic import LYING_BENT, STANDING, frames_from_poses, hold, write_fixture_suite

IDX = LandmarkIndex


def build_frame(
    frame_index: int = 0,
    timestamp_s: float = 0.0,
    points: dict[LandmarkIndex, tuple] | None = None,
    present: bool = True,
) -> PoseFrame:
    """Frame with only the named landmarks visible.

    ``points`` maps index -> (x, y) or (x, y, visibility); every unnamed slot
    gets visibility 0 so the visibility gate hides exactly what a test does
    not pin down.
    """
    if not present:
        return PoseFrame(frame_index, timestamp_s, ABSENT_LANDMARKS, False)
    landmarks = [Landmark(0.0, 0.0, 0.0, 0.0)] * NUM_LANDMARKS
    for index, value in (points or {}).items():
        if len(value) == 2:
            x, y = value
            visibility = 1.0
        else:
            x, y, visibility = value
        landmarks[index] = Landmark(x, y, 0.0, visibility)
    return PoseFrame(frame_index, timestamp_s, tuple(landmarks), True)


def body_points(
    nose: tuple[float, float],
    shoulder: tuple[float, float],
    hip: tuple[float, float],
    knee: tuple[float, float],
    ankle: tuple[float, float],
) -> dict[LandmarkIndex, tuple]:
    """Symmetric body: both sides of each pair sit on the given midpoint."""
    return {
        IDX.NOSE: nose,
        IDX.LEFT_SHOULDER: shoulder,
        IDX.RIGHT_SHOULDER: shoulder,
        IDX.LEFT_HIP: hip,
        IDX.RIGHT_HIP: hip,
        IDX.LEFT_KNEE: knee,
        IDX.RIGHT_KNEE: knee,
        IDX.LEFT_ANKLE: ankle,
        IDX.RIGHT_ANKLE: ankle,
    }


@pytest.fixture
def stand_then_lie() -> list[PoseFrame]:
    """Jitter-free 30 standing + 30 lying frames; the window-arithmetic oracle."""
    return frames_from_poses(hold(STANDING, 30) + hold(LYING_BENT, 30))


@pytest.fixture(scope="session")
def fixture_suite(tmp_path_factory: pytest.TempPathFactory):
    """The 12-clip synthetic suite on disk; returns the manifest path."""
    outdir = tmp_path_factory.mktemp("clips")
    return write_fixture_suite(outdir)


coordinate_st = st.floats(min_value=-0.5, max_value=1.5, allow_nan=False)
visibility_st = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)

landmark_st = st.builds(
    Landmark,
    x=coordinate_st,
    y=coordinate_st,
    z=st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
    visibility=visibility_st,
)


@st.composite
def pose_frames(draw, frame_index=None, timestamp_s=None):
    """A structurally valid frame with arbitrary landmark content."""
    present = draw(st.booleans())
    if frame_index is None:
        frame_index = draw(st.integers(min_value=0, max_value=10**6))
    if timestamp_s is None:
        timestamp_s = draw(st.floats(min_value=0.0, max_value=10**6, allow_nan=False))
    if present:
        landmarks = tuple(draw(landmark_st) for _ in range(NUM_LANDMARKS))
    else:
        landmarks = ABSENT_LANDMARKS
    return PoseFrame(frame_index, timestamp_s, landmarks, present)

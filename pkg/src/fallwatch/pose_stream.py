"""Landmark data model and the newline-delimited stream format.

A pose stream is JSONL, one record per video frame:

    {"frame": 0, "t": 0.033, "present": true, "landmarks": [[x, y, z, v], ...]}

``landmarks`` always holds 33 entries ordered by :class:`LandmarkIndex`.
Coordinates are normalized image coordinates (x: 0 = left edge, 1 = right;
y: 0 = top, 1 = bottom, so y grows downward) and may drift slightly outside
[0, 1] when a body part leaves the frame. ``z`` is relative depth, carried
but unused here. Frames where the pose model found nobody are explicit
``present: false`` records rather than gaps, so the timeline stays dense and
downstream window buffers decay deterministically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

NUM_LANDMARKS = 33

FALL_LABEL = "FALL"
ADL_LABEL = "ADL"
CLIP_LABELS = (FALL_LABEL, ADL_LABEL)


class MalformedRecord(ValueError):
    """A stream line that cannot become a valid PoseFrame (corrupt stream)."""


class OrderViolation(ValueError):
    """Frame index or timestamp went backwards within one stream (producer bug)."""


class ManifestError(ValueError):
    """A clip manifest that does not match the documented schema."""


class LandmarkIndex(IntEnum):
    """Slot assignment of the 33-point full-body pose topology."""

    NOSE = 0
    LEFT_EYE_INNER = 1
    LEFT_EYE = 2
    LEFT_EYE_OUTER = 3
    RIGHT_EYE_INNER = 4
    RIGHT_EYE = 5
    RIGHT_EYE_OUTER = 6
    LEFT_EAR = 7
    RIGHT_EAR = 8
    MOUTH_LEFT = 9
    MOUTH_RIGHT = 10
    LEFT_SHOULDER = 11
    RIGHT_SHOULDER = 12
    LEFT_ELBOW = 13
    RIGHT_ELBOW = 14
    LEFT_WRIST = 15
    RIGHT_WRIST = 16
    LEFT_PINKY = 17
    RIGHT_PINKY = 18
    LEFT_INDEX = 19
    RIGHT_INDEX = 20
    LEFT_THUMB = 21
    RIGHT_THUMB = 22
    LEFT_HIP = 23
    RIGHT_HIP = 24
    LEFT_KNEE = 25
    RIGHT_KNEE = 26
    LEFT_ANKLE = 27
    RIGHT_ANKLE = 28
    LEFT_HEEL = 29
    RIGHT_HEEL = 30
    LEFT_FOOT_INDEX = 31
    RIGHT_FOOT_INDEX = 32


class Landmark(NamedTuple):
    """One body keypoint in normalized image coordinates."""

    x: float
    y: float
    z: float
    visibility: float


ABSENT_LANDMARK = Landmark(0.0, 0.0, 0.0, 0.0)
ABSENT_LANDMARKS: tuple[Landmark, ...] = (ABSENT_LANDMARK,) * NUM_LANDMARKS


@dataclass(frozen=True, slots=True)
class PoseFrame:
    """One frame's worth of landmarks. Immutable, safe to share across threads."""

    frame_index: int
    timestamp_s: float
    landmarks: tuple[Landmark, ...]
    person_present: bool

    def landmark(self, index: LandmarkIndex | int) -> Landmark:
        return self.landmarks[index]


@dataclass(frozen=True)
class ClipManifestEntry:
    """One labeled clip in an evaluation manifest."""

    clip_id: str
    stream_path: Path
    label: str  # FALL or ADL
    fps: float


def _check_number(value: object) -> float:
    """Coerce a JSON scalar to a finite float or raise MalformedRecord."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedRecord(f"expected a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise MalformedRecord(f"non-finite number {value!r}")
    return out


def parse_frame_line(line: str) -> PoseFrame:
    """Parse one JSONL record into a PoseFrame.

    ``person_present`` is false iff the record's ``present`` flag is false or
    its landmark array is the all-zero sentinel; absent-person frames are
    normalized to all-zero landmarks with visibility 0.

    Raises MalformedRecord on bad syntax, wrong landmark count, non-finite
    numbers, or out-of-range visibility. Never raises anything else, whatever
    the input line contains.
    """
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"invalid JSON: {exc}") from None
    if not isinstance(record, dict):
        raise MalformedRecord("record is not a JSON object")

    try:
        raw_frame = record["frame"]
        raw_t = record["t"]
        raw_present = record["present"]
        raw_landmarks = record["landmarks"]
    except KeyError as exc:
        raise MalformedRecord(f"missing key {exc.args[0]!r}") from None

    if isinstance(raw_frame, bool) or not isinstance(raw_frame, int):
        raise MalformedRecord(f"frame must be an integer, got {raw_frame!r}")
    if raw_frame < 0:
        raise MalformedRecord(f"frame must be nonnegative, got {raw_frame}")
    timestamp = _check_number(raw_t)
    if timestamp < 0:
        raise MalformedRecord(f"t must be nonnegative, got {raw_t!r}")
    if not isinstance(raw_present, bool):
        raise MalformedRecord(f"present must be a boolean, got {raw_present!r}")
    if not isinstance(raw_landmarks, list) or len(raw_landmarks) != NUM_LANDMARKS:
        raise MalformedRecord(
            f"landmarks must hold exactly {NUM_LANDMARKS} entries, "
            f"got {len(raw_landmarks) if isinstance(raw_landmarks, list) else raw_landmarks!r}"
        )

    landmarks: list[Landmark] = []
    all_zero = True
    for entry in raw_landmarks:
        if not isinstance(entry, list) or len(entry) != 4:
            raise MalformedRecord(f"landmark entry must be [x, y, z, visibility], got {entry!r}")
        x = _check_number(entry[0])
        y = _check_number(entry[1])
        z = _check_number(entry[2])
        visibility = _check_number(entry[3])
        if not 0.0 <= visibility <= 1.0:
            raise MalformedRecord(f"visibility out of [0, 1]: {visibility!r}")
        if x or y or z or visibility:
            all_zero = False
        landmarks.append(Landmark(x, y, z, visibility))

    present = raw_present and not all_zero
    return PoseFrame(
        frame_index=raw_frame,
        timestamp_s=timestamp,
        landmarks=ABSENT_LANDMARKS if not present else tuple(landmarks),
        person_present=present,
    )


def write_frame_line(frame: PoseFrame) -> str:
    """Serialize a PoseFrame to one JSONL record (no trailing newline).

    Round-trip contract: parse_frame_line(write_frame_line(f)) == f, with
    coordinates preserved via shortest-repr float serialization.
    """
    record = {
        "frame": frame.frame_index,
        "t": frame.timestamp_s,
        "present": frame.person_present,
        "landmarks": [[lm.x, lm.y, lm.z, lm.visibility] for lm in frame.landmarks],
    }
    return json.dumps(record, separators=(",", ":"))


def read_stream(source: Iterable[str | bytes]) -> Iterator[PoseFrame]:
    """Yield PoseFrames from newline-delimited records, in order.

    Accepts any iterable of lines (an open text or binary file, a list of
    strings). Blank lines are skipped. Enforces strictly increasing
    frame_index and nondecreasing timestamp_s; a regression raises
    OrderViolation, a bad record raises MalformedRecord.
    """
    last_index = -1
    last_timestamp = 0.0
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise MalformedRecord(f"line {lineno}: undecodable bytes ({exc})") from None
        else:
            line = raw
        if not line.strip():
            continue
        try:
            frame = parse_frame_line(line)
        except MalformedRecord as exc:
            raise MalformedRecord(f"line {lineno}: {exc}") from None
        if frame.frame_index <= last_index:
            raise OrderViolation(
                f"line {lineno}: frame_index {frame.frame_index} after {last_index}"
            )
        if frame.timestamp_s < last_timestamp:
            raise OrderViolation(
                f"line {lineno}: timestamp {frame.timestamp_s} after {last_timestamp}"
            )
        last_index = frame.frame_index
        last_timestamp = frame.timestamp_s
        yield frame


def read_stream_path(path: str | Path) -> Iterator[PoseFrame]:
    """read_stream over a file path, closing the file when exhausted."""
    with open(path, "r", encoding="utf-8") as handle:
        yield from read_stream(handle)


def write_stream_path(path: str | Path, frames: Iterable[PoseFrame]) -> int:
    """Write frames to a JSONL file; returns the number of records written."""
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for frame in frames:
            handle.write(write_frame_line(frame))
            handle.write("\n")
            count += 1
    return count


def load_manifest(path: str | Path) -> list[ClipManifestEntry]:
    """Load a clip manifest: a JSON array of {clip_id, path, label, fps}.

    Relative stream paths resolve against the manifest file's directory.
    """
    manifest_path = Path(path)
    try:
        raw = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{manifest_path}: invalid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise ManifestError(f"{manifest_path}: manifest must be a JSON array")

    entries: list[ClipManifestEntry] = []
    base = manifest_path.parent
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ManifestError(f"{manifest_path}: entry {i} is not an object")
        try:
            clip_id = item["clip_id"]
            rel_path = item["path"]
            label = item["label"]
            fps = item["fps"]
        except KeyError as exc:
            raise ManifestError(f"{manifest_path}: entry {i} missing {exc.args[0]!r}") from None
        if not isinstance(clip_id, str) or not clip_id:
            raise ManifestError(f"{manifest_path}: entry {i}: clip_id must be a nonempty string")
        if not isinstance(rel_path, str):
            raise ManifestError(f"{manifest_path}: entry {i}: path must be a string")
        if label not in CLIP_LABELS:
            raise ManifestError(
                f"{manifest_path}: entry {i}: label must be one of {CLIP_LABELS}, got {label!r}"
            )
        if (
            isinstance(fps, bool)
            or not isinstance(fps, (int, float))
            or not math.isfinite(fps)
            or not fps > 0
        ):
            raise ManifestError(f"{manifest_path}: entry {i}: fps must be > 0, got {fps!r}")
        stream_path = Path(rel_path)
        if not stream_path.is_absolute():
            stream_path = base / stream_path
        entries.append(
            ClipManifestEntry(clip_id=clip_id, stream_path=stream_path, label=label, fps=float(fps))
        )
    return entries

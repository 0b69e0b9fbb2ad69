"""Indicator firing, persistence buffers, weighted voting, and fall events.

Per frame the pipeline is: update calibration, extract features, apply the
per-indicator threshold checks, push the six boolean firings into six
fixed-length sliding windows, then vote. An indicator is *active* once it
fired in at least ceil(persistence_fraction * buffer_len) of the frames in
its window, so a single-frame posture spike never drives a detection while a
sustained fall posture accumulates toward one. The vote is the weighted sum
over active indicators; default unit weights make it a plain >= 4-of-6
majority. An emitted event starts a cooldown so continuous monitoring does
not re-alert on every subsequent frame of the same fall.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .features import (
    Calibration,
    FeatureVector,
    extract_features,
    update_calibration,
)
from .pose_stream import OrderViolation, PoseFrame

INDICATOR_NAMES = (
    "height_ratio",
    "torso_angle",
    "knee_ankle",
    "head_floor",
    "alignment",
    "speed",
)
NUM_INDICATORS = len(INDICATOR_NAMES)


class ConfigError(ValueError):
    """DetectorConfig invariant violated."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


@dataclass(frozen=True)
class DetectorConfig:
    """Every numeric constant of the detector in one place.

    Firing rules: height_ratio < height_ratio_max; torso-leg angle within
    [angle_low_deg, angle_high_deg]; knee_ankle_gap < knee_ankle_max;
    head_floor_distance < head_floor_max; upper body misaligned; downward
    speed > speed_min. ``weights`` follows INDICATOR_NAMES order.
    """

    height_ratio_max: float = 0.5
    angle_low_deg: float = 60.0
    angle_high_deg: float = 120.0
    knee_ankle_max: float = 0.1
    head_floor_max: float = 0.15
    speed_min: float = 1.2
    visibility_min: float = 0.5
    buffer_len: int = 20
    persistence_fraction: float = 0.5
    weights: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    vote_threshold: float = 4.0
    cooldown_frames: int = 60
    warmup_frames: int = 10

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        for name in (
            "height_ratio_max",
            "angle_low_deg",
            "angle_high_deg",
            "knee_ankle_max",
            "head_floor_max",
            "speed_min",
            "visibility_min",
            "persistence_fraction",
            "vote_threshold",
        ):
            _require(math.isfinite(getattr(self, name)), f"{name} must be finite")
        _require(self.angle_low_deg < self.angle_high_deg, "angle_low_deg must be < angle_high_deg")
        _require(0.0 <= self.visibility_min <= 1.0, "visibility_min must be in [0, 1]")
        _require(self.buffer_len >= 1, "buffer_len must be >= 1")
        _require(
            0.0 < self.persistence_fraction <= 1.0,
            "persistence_fraction must be in (0, 1]",
        )
        _require(len(self.weights) == NUM_INDICATORS, f"weights must have {NUM_INDICATORS} entries")
        _require(
            all(math.isfinite(w) and w >= 0.0 for w in self.weights),
            "weights must be nonnegative",
        )
        _require(
            0.0 < self.vote_threshold <= sum(self.weights),
            "vote_threshold must be in (0, sum(weights)]",
        )
        _require(self.cooldown_frames >= 0, "cooldown_frames must be >= 0")
        _require(self.warmup_frames >= 1, "warmup_frames must be >= 1")

    @property
    def persistence_count(self) -> int:
        """Firings required inside the window before an indicator is active."""
        return math.ceil(self.persistence_fraction * self.buffer_len)


class IndicatorBuffer:
    """Sliding window of the last ``capacity`` firings with a count cache.

    fire_count always equals the number of True entries in the window; the
    incremental maintenance here is cross-checked against full-window
    recomputation in the test suite.
    """

    __slots__ = ("capacity", "fire_count", "_window")

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.fire_count = 0
        self._window: deque[bool] = deque()

    def push(self, fired: bool) -> None:
        if len(self._window) == self.capacity:
            self.fire_count -= self._window.popleft()
        self._window.append(fired)
        self.fire_count += fired

    def window(self) -> tuple[bool, ...]:
        return tuple(self._window)

    def __len__(self) -> int:
        return len(self._window)


@dataclass(frozen=True)
class FallEvent:
    """An emitted detection; vote_score >= the configured threshold."""

    frame_index: int
    timestamp_s: float
    vote_score: float
    active_indicators: tuple[str, ...]
    feature_snapshot: FeatureVector


@dataclass(frozen=True)
class DetectorOutput:
    """Everything the detector decided about one frame."""

    features: FeatureVector
    firings: tuple[bool, ...]
    vote_score: float
    event: FallEvent | None


def evaluate_indicators(fv: FeatureVector, cfg: DetectorConfig) -> tuple[bool, ...]:
    """Apply the six threshold checks; UNDEFINED features never fire."""
    return (
        fv.height_ratio is not None and fv.height_ratio < cfg.height_ratio_max,
        fv.torso_leg_angle_deg is not None
        and cfg.angle_low_deg <= fv.torso_leg_angle_deg <= cfg.angle_high_deg,
        fv.knee_ankle_gap is not None and fv.knee_ankle_gap < cfg.knee_ankle_max,
        fv.head_floor_distance is not None and fv.head_floor_distance < cfg.head_floor_max,
        fv.upper_body_misaligned is True,
        fv.speed is not None
        and fv.velocity_y is not None
        and fv.velocity_y > 0.0
        and fv.speed > cfg.speed_min,
    )


def active_flags(buffers: Iterable[IndicatorBuffer], cfg: DetectorConfig) -> tuple[bool, ...]:
    """Per-indicator persistence decision over the current windows."""
    need = cfg.persistence_count
    return tuple(buf.fire_count >= need for buf in buffers)


def vote_score(buffers: Iterable[IndicatorBuffer], cfg: DetectorConfig) -> float:
    """Weighted sum over active indicators."""
    return sum(
        weight for weight, active in zip(cfg.weights, active_flags(buffers, cfg)) if active
    )


class FallDetector:
    """Streaming fall detector; one instance per stream, not shared.

    Feed frames through :meth:`update` in order; each call returns a
    DetectorOutput whose ``event`` is set on the frames where a fall is
    declared. Deterministic: the same frames and config always produce the
    same outputs, whether fed one at a time or through :func:`run_stream`.
    """

    def __init__(self, config: DetectorConfig | None = None):
        self.config = config if config is not None else DetectorConfig()
        self.calibration = Calibration()
        self.buffers: tuple[IndicatorBuffer, ...] = tuple(
            IndicatorBuffer(self.config.buffer_len) for _ in range(NUM_INDICATORS)
        )
        self.cooldown_remaining = 0
        self.frames_processed = 0
        self._prev: PoseFrame | None = None

    def reset(self) -> None:
        """Fresh state: empty buffers, uncalibrated, cooldown cleared."""
        self.calibration = Calibration()
        self.buffers = tuple(
            IndicatorBuffer(self.config.buffer_len) for _ in range(NUM_INDICATORS)
        )
        self.cooldown_remaining = 0
        self.frames_processed = 0
        self._prev = None

    def update(self, frame: PoseFrame) -> DetectorOutput:
        """Consume one frame and decide; raises OrderViolation on regressions."""
        cfg = self.config
        if self._prev is not None:
            if frame.frame_index <= self._prev.frame_index:
                raise OrderViolation(
                    f"frame_index {frame.frame_index} after {self._prev.frame_index}"
                )
            if frame.timestamp_s < self._prev.timestamp_s:
                raise OrderViolation(
                    f"timestamp {frame.timestamp_s} after {self._prev.timestamp_s}"
                )

        self.calibration = update_calibration(
            self.calibration, frame, cfg.visibility_min, cfg.warmup_frames
        )
        fv = extract_features(frame, self._prev, self.calibration, cfg.visibility_min)
        firings = evaluate_indicators(fv, cfg)
        for buf, fired in zip(self.buffers, firings):
            buf.push(fired)

        actives = active_flags(self.buffers, cfg)
        score = sum(w for w, a in zip(cfg.weights, actives) if a)

        if self.cooldown_remaining > 0:
            self.cooldown_remaining -= 1

        event: FallEvent | None = None
        if (
            score >= cfg.vote_threshold
            and self.calibration.calibrated
            and self.cooldown_remaining == 0
        ):
            event = FallEvent(
                frame_index=frame.frame_index,
                timestamp_s=frame.timestamp_s,
                vote_score=score,
                active_indicators=tuple(
                    name for name, a in zip(INDICATOR_NAMES, actives) if a
                ),
                feature_snapshot=fv,
            )
            self.cooldown_remaining = cfg.cooldown_frames

        self._prev = frame
        self.frames_processed += 1
        return DetectorOutput(features=fv, firings=firings, vote_score=score, event=event)


def detect_stream(
    frames: Iterable[PoseFrame],
    config: DetectorConfig | None = None,
) -> Iterator[DetectorOutput]:
    """Lazily map frames to DetectorOutputs from a fresh detector state."""
    detector = FallDetector(config)
    for frame in frames:
        yield detector.update(frame)


def run_stream(
    frames: Iterable[PoseFrame],
    config: DetectorConfig | None = None,
) -> list[FallEvent]:
    """Fold a whole stream from a fresh state; returns the emitted events."""
    return [out.event for out in detect_stream(frames, config) if out.event is not None]

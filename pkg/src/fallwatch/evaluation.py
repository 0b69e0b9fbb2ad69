"""Clip-level scoring: confusion matrix and the derived metrics.

A clip is predicted FALL iff the detector emitted at least one event anywhere
in it, which is the only clip-level rule consistent with a detector that
stops caring after the first alert. FALL is the positive class throughout.
Metrics with a zero denominator are reported as None (rendered "n/a" / JSON
null) rather than silently collapsing to 0 or 1 on degenerate manifests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Protocol

from .detector import DetectorConfig, FallEvent, run_stream
from .pose_stream import (
    ADL_LABEL,
    FALL_LABEL,
    ClipManifestEntry,
    read_stream_path,
)


class StreamUnreadable(OSError):
    """A manifest entry's stream file cannot be opened or read."""


class UnknownClip(ValueError):
    """A prediction references a clip_id absent from the manifest."""


class DuplicateClip(ValueError):
    """A clip_id appears more than once in the manifest."""


class ClipOutcome(Protocol):
    """Anything scoreable: a clip_id plus a FALL/ADL call."""

    clip_id: str
    predicted: str


@dataclass(frozen=True)
class ClipPrediction:
    """The detector's verdict on one clip.

    Instances built by :func:`predict_clip` satisfy predicted == FALL iff
    ``events`` is nonempty; replay-mode predictions carry no events.
    """

    clip_id: str
    predicted: str
    events: tuple[FallEvent, ...] = ()

    @classmethod
    def from_events(cls, clip_id: str, events: Iterable[FallEvent]) -> "ClipPrediction":
        events = tuple(events)
        return cls(
            clip_id=clip_id,
            predicted=FALL_LABEL if events else ADL_LABEL,
            events=events,
        )


@dataclass(frozen=True)
class ConfusionMatrix:
    """Clip counts with FALL as the positive class."""

    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn


@dataclass(frozen=True)
class MetricsReport:
    """The five headline metrics; None where the denominator was 0."""

    accuracy: float | None
    precision: float | None
    recall: float | None
    specificity: float | None
    f1: float | None


def predict_clip(entry: ClipManifestEntry, cfg: DetectorConfig | None = None) -> ClipPrediction:
    """Run the detector over one manifest entry's stream."""
    try:
        frames = read_stream_path(entry.stream_path)
        events = run_stream(frames, cfg)
    except OSError as exc:
        raise StreamUnreadable(f"{entry.clip_id}: cannot read {entry.stream_path}: {exc}") from None
    return ClipPrediction.from_events(entry.clip_id, events)


def confusion(
    preds: Iterable[ClipOutcome],
    manifest: Iterable[ClipManifestEntry],
) -> ConfusionMatrix:
    """Tally predictions against manifest labels.

    Raises DuplicateClip when the manifest repeats a clip_id and UnknownClip
    when a prediction has no manifest entry. Order-independent.
    """
    labels: dict[str, str] = {}
    for entry in manifest:
        if entry.clip_id in labels:
            raise DuplicateClip(f"clip_id {entry.clip_id!r} appears more than once")
        labels[entry.clip_id] = entry.label

    tp = fn = fp = tn = 0
    for pred in preds:
        try:
            actual = labels[pred.clip_id]
        except KeyError:
            raise UnknownClip(f"clip_id {pred.clip_id!r} not in manifest") from None
        if actual == FALL_LABEL:
            if pred.predicted == FALL_LABEL:
                tp += 1
            else:
                fn += 1
        else:
            if pred.predicted == FALL_LABEL:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)


def _ratio(numerator: int, denominator: int) -> float | None:
    if denominator == 0:
        return None
    return numerator / denominator


def compute_metrics(m: ConfusionMatrix) -> MetricsReport:
    """Accuracy, precision, recall, specificity, and F1 from clip counts."""
    accuracy = _ratio(m.tp + m.tn, m.total)
    precision = _ratio(m.tp, m.tp + m.fp)
    recall = _ratio(m.tp, m.tp + m.fn)
    specificity = _ratio(m.tn, m.tn + m.fp)
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return MetricsReport(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        specificity=specificity,
        f1=f1,
    )


METRIC_FIELDS = ("accuracy", "precision", "recall", "specificity", "f1")


def _rounded(value: float | None) -> float | None:
    return None if value is None else round(value, 4)


def _formatted(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def render_report(report: MetricsReport, m: ConfusionMatrix) -> str:
    """Deterministic human-readable report; identical inputs, identical bytes."""
    lines = [
        f"clips: {m.total} (positive class: {FALL_LABEL})",
        f"confusion: tp={m.tp} fn={m.fn} fp={m.fp} tn={m.tn}",
    ]
    for name in METRIC_FIELDS:
        lines.append(f"{name:<12} {_formatted(getattr(report, name))}")
    return "\n".join(lines) + "\n"


def render_report_json(report: MetricsReport, m: ConfusionMatrix) -> str:
    """Machine-readable report: counts plus metrics rounded to 4 decimals."""
    payload: dict[str, int | float | None] = {
        "tp": m.tp,
        "fn": m.fn,
        "fp": m.fp,
        "tn": m.tn,
    }
    for name in METRIC_FIELDS:
        payload[name] = _rounded(getattr(report, name))
    return json.dumps(payload)

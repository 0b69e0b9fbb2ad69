"""Evaluation tests: the reference confusion matrix, metric arithmetic
against exact fractions, and the clip-level decision rule.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fallwatch.detector import FallEvent
from fallwatch.evaluation import (
    ClipPrediction,
    ConfusionMatrix,
    DuplicateClip,
    MetricsReport,
    StreamUnreadable,
    UnknownClip,
    compute_metrics,
    confusion,
    predict_clip,
    render_report,
    render_report_json,
)
from fallwatch.features import EMPTY_FEATURES
from fallwatch.pose_stream import ClipManifestEntry, load_manifest

# the reference outcome the metric arithmetic must reproduce
REFERENCE = ConfusionMatrix(tp=75, fn=1, fp=10, tn=44)

REFERENCE_METRICS = {
    "accuracy": 0.9154,
    "precision": 0.8824,
    "recall": 0.9868,
    "specificity": 0.8148,
    "f1": 0.9317,
}


def exact_metrics(m: ConfusionMatrix) -> dict[str, Fraction]:
    """Independent metric arithmetic in exact rationals; only defined entries."""
    out: dict[str, Fraction] = {}
    if m.total:
        out["accuracy"] = Fraction(m.tp + m.tn, m.total)
    if m.tp + m.fp:
        out["precision"] = Fraction(m.tp, m.tp + m.fp)
    if m.tp + m.fn:
        out["recall"] = Fraction(m.tp, m.tp + m.fn)
    if m.tn + m.fp:
        out["specificity"] = Fraction(m.tn, m.tn + m.fp)
    if "precision" in out and "recall" in out and out["precision"] + out["recall"]:
        out["f1"] = 2 * out["precision"] * out["recall"] / (out["precision"] + out["recall"])
    return out


def test_reference_matrix_reproduces_reference_metrics():
    report = compute_metrics(REFERENCE)
    for name, expected in REFERENCE_METRICS.items():
        assert math.isclose(getattr(report, name), expected, abs_tol=1e-4), name


def test_reference_matrix_matches_exact_fractions():
    report = compute_metrics(REFERENCE)
    for name, expected in exact_metrics(REFERENCE).items():
        assert math.isclose(getattr(report, name), float(expected), abs_tol=1e-12), name


@given(
    tp=st.integers(0, 500),
    fn=st.integers(0, 500),
    fp=st.integers(0, 500),
    tn=st.integers(0, 500),
)
def test_metrics_match_exact_fractions_everywhere(tp, fn, fp, tn):
    m = ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)
    report = compute_metrics(m)
    expected = exact_metrics(m)
    for name in ("accuracy", "precision", "recall", "specificity", "f1"):
        value = getattr(report, name)
        assert (value is None) == (name not in expected), name
        if value is not None:
            assert math.isclose(value, float(expected[name]), abs_tol=1e-12), name


def test_f1_undefined_when_precision_and_recall_are_zero():
    report = compute_metrics(ConfusionMatrix(tp=0, fn=5, fp=5, tn=5))
    assert report.precision == 0.0
    assert report.recall == 0.0
    assert report.f1 is None


def test_empty_matrix_all_undefined():
    report = compute_metrics(ConfusionMatrix())
    assert report == MetricsReport(None, None, None, None, None)


def entry(clip_id: str, label: str) -> ClipManifestEntry:
    return ClipManifestEntry(clip_id=clip_id, stream_path=f"/nowhere/{clip_id}.jsonl", label=label, fps=30.0)


def pred(clip_id: str, predicted: str) -> ClipPrediction:
    return ClipPrediction(clip_id=clip_id, predicted=predicted)


def test_confusion_all_correct_four_clips():
    manifest = [entry("f1", "FALL"), entry("f2", "FALL"), entry("a1", "ADL"), entry("a2", "ADL")]
    preds = [pred("f1", "FALL"), pred("f2", "FALL"), pred("a1", "ADL"), pred("a2", "ADL")]
    assert confusion(preds, manifest) == ConfusionMatrix(tp=2, fn=0, fp=0, tn=2)


def test_confusion_counts_each_cell():
    manifest = [entry(c, lab) for c, lab in [("a", "FALL"), ("b", "FALL"), ("c", "ADL"), ("d", "ADL")]]
    preds = [pred("a", "FALL"), pred("b", "ADL"), pred("c", "FALL"), pred("d", "ADL")]
    m = confusion(preds, manifest)
    assert (m.tp, m.fn, m.fp, m.tn) == (1, 1, 1, 1)
    assert m.total == 4


def test_confusion_rejects_duplicate_manifest_ids():
    manifest = [entry("a", "FALL"), entry("a", "ADL")]
    with pytest.raises(DuplicateClip):
        confusion([pred("a", "FALL")], manifest)


def test_confusion_rejects_unknown_prediction():
    with pytest.raises(UnknownClip):
        confusion([pred("ghost", "FALL")], [entry("a", "FALL")])


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40)
def test_confusion_is_permutation_invariant(seed):
    import random

    rng = random.Random(seed)
    labels = ["FALL", "ADL"]
    manifest = [entry(f"c{i}", rng.choice(labels)) for i in range(20)]
    preds = [pred(e.clip_id, rng.choice(labels)) for e in manifest]
    base = confusion(preds, manifest)
    shuffled_preds = preds[:]
    shuffled_manifest = manifest[:]
    rng.shuffle(shuffled_preds)
    rng.shuffle(shuffled_manifest)
    assert confusion(shuffled_preds, shuffled_manifest) == base
    assert compute_metrics(confusion(shuffled_preds, shuffled_manifest)) == compute_metrics(base)


def event(frame_index: int) -> FallEvent:
    return FallEvent(
        frame_index=frame_index,
        timestamp_s=frame_index / 30,
        vote_score=4.0,
        active_indicators=("torso_angle",),
        feature_snapshot=EMPTY_FEATURES,
    )


def test_prediction_rule_zero_events_is_adl():
    assert ClipPrediction.from_events("c", []).predicted == "ADL"


def test_prediction_rule_any_events_is_fall():
    p = ClipPrediction.from_events("c", [event(10), event(80)])
    assert p.predicted == "FALL"
    assert len(p.events) == 2


def test_predict_clip_missing_stream():
    with pytest.raises(StreamUnreadable):
        predict_clip(entry("gone", "FALL"))


def test_predict_clip_on_fixture_suite(fixture_suite):
    manifest = load_manifest(fixture_suite)
    by_id = {e.clip_id: e for e in manifest}
    fall = predict_clip(by_id["fall_side"])
    adl = predict_clip(by_id["adl_walk"])
    assert fall.predicted == "FALL" and len(fall.events) == 1
    assert adl.predicted == "ADL" and adl.events == ()


def test_render_report_shape_and_determinism():
    report = compute_metrics(REFERENCE)
    text = render_report(report, REFERENCE)
    assert text == render_report(report, REFERENCE)
    lines = text.splitlines()
    assert lines[0] == "clips: 130 (positive class: FALL)"
    assert lines[1] == "confusion: tp=75 fn=1 fp=10 tn=44"
    assert "accuracy     0.9154" in lines
    assert "f1           0.9317" in lines


def test_render_report_undefined_as_na():
    matrix = ConfusionMatrix(tp=0, fn=0, fp=0, tn=3)
    text = render_report(compute_metrics(matrix), matrix)
    assert "precision    n/a" in text
    assert "specificity  1.0000" in text


def test_render_report_json_round_trips():
    report = compute_metrics(REFERENCE)
    payload = json.loads(render_report_json(report, REFERENCE))
    assert payload["tp"] == 75
    assert payload["accuracy"] == 0.9154
    assert payload["f1"] == 0.9317
    assert list(payload) == ["tp", "fn", "fp", "tn", "accuracy", "precision", "recall", "specificity", "f1"]


def test_render_report_json_null_for_undefined():
    matrix = ConfusionMatrix()
    payload = json.loads(render_report_json(compute_metrics(matrix), matrix))
    assert payload["accuracy"] is None

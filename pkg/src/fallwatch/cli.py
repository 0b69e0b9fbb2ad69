"""Command-line front end: detect on a stream, evaluate a manifest, sweep a grid.

Exit codes: 0 clean run, 2 I/O trouble (unreadable files, corrupt streams,
malformed replay files), 3 bad configuration or grid spec, 4 manifest
problems (schema violations, duplicate or unknown clip ids).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, TextIO

from .config import build_config, grid_points, parse_grid_spec
from .detector import ConfigError, DetectorConfig, FallDetector, FallEvent
from .evaluation import (
    METRIC_FIELDS,
    ClipPrediction,
    DuplicateClip,
    StreamUnreadable,
    UnknownClip,
    compute_metrics,
    confusion,
    predict_clip,
    render_report,
    render_report_json,
)
from .pose_stream import (
    CLIP_LABELS,
    MalformedRecord,
    ManifestError,
    OrderViolation,
    load_manifest,
    read_stream,
)

EXIT_OK = 0
EXIT_IO = 2
EXIT_CONFIG = 3
EXIT_MANIFEST = 4


class ReplayError(ValueError):
    """A replay file that is not an array of {clip_id, predicted} records."""


def _error(message: str) -> None:
    print(f"fallwatch: {message}", file=sys.stderr)


def _event_line(event: FallEvent) -> str:
    record = {
        "frame": event.frame_index,
        "t": event.timestamp_s,
        "score": event.vote_score,
        "indicators": list(event.active_indicators),
    }
    return json.dumps(record, separators=(",", ":"))


def detect_cmd(args: argparse.Namespace) -> int:
    """Stream frames through a detector, print events as they happen."""
    try:
        cfg = build_config(args.config)
    except ConfigError as exc:
        _error(f"config: {exc}")
        return EXIT_CONFIG
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO

    source: TextIO
    if args.input == "-":
        source = sys.stdin
        owns_source = False
    else:
        try:
            source = open(args.input, "r", encoding="utf-8")
        except OSError as exc:
            _error(str(exc))
            return EXIT_IO
        owns_source = True

    detector = FallDetector(cfg)
    n_frames = 0
    n_events = 0
    try:
        for frame in read_stream(source):
            output = detector.update(frame)
            n_frames += 1
            if output.event is not None:
                n_events += 1
                print(_event_line(output.event), flush=True)
    except (MalformedRecord, OrderViolation) as exc:
        _error(f"stream: {exc}")
        return EXIT_IO
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO
    finally:
        if owns_source:
            source.close()

    print(f"fallwatch: {n_events} event(s) in {n_frames} frame(s)", file=sys.stderr)
    return EXIT_OK


def load_replay(path: str | Path) -> list[ClipPrediction]:
    """Read precomputed clip verdicts: a JSON array of {clip_id, predicted}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list):
        raise ReplayError("replay file must be a JSON array")
    preds: list[ClipPrediction] = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ReplayError(f"entry {i} is not an object")
        clip_id = item.get("clip_id")
        predicted = item.get("predicted")
        if not isinstance(clip_id, str) or not clip_id:
            raise ReplayError(f"entry {i}: clip_id must be a nonempty string")
        if predicted not in CLIP_LABELS:
            raise ReplayError(f"entry {i}: predicted must be one of {CLIP_LABELS}")
        preds.append(ClipPrediction(clip_id=clip_id, predicted=predicted))
    return preds


def evaluate_cmd(args: argparse.Namespace) -> int:
    """Score a labeled manifest; optionally from a replay file of verdicts."""
    try:
        cfg = build_config(args.config)
    except ConfigError as exc:
        _error(f"config: {exc}")
        return EXIT_CONFIG
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO

    try:
        manifest = load_manifest(args.manifest)
    except ManifestError as exc:
        _error(str(exc))
        return EXIT_MANIFEST
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO

    try:
        if args.replay is not None:
            preds = load_replay(args.replay)
        else:
            preds = [predict_clip(entry, cfg) for entry in manifest]
    except (ReplayError, json.JSONDecodeError) as exc:
        _error(f"replay: {exc}")
        return EXIT_IO
    except (StreamUnreadable, OSError) as exc:
        _error(str(exc))
        return EXIT_IO
    except (MalformedRecord, OrderViolation) as exc:
        _error(f"stream: {exc}")
        return EXIT_IO

    try:
        matrix = confusion(preds, manifest)
    except (DuplicateClip, UnknownClip) as exc:
        _error(str(exc))
        return EXIT_MANIFEST

    report = compute_metrics(matrix)
    sys.stdout.write(render_report(report, matrix))
    if args.report is not None:
        try:
            Path(args.report).write_text(render_report_json(report, matrix) + "\n", encoding="utf-8")
        except OSError as exc:
            _error(str(exc))
            return EXIT_IO
    return EXIT_OK


def _format_cell(value: Any) -> str:
    if isinstance(value, tuple):
        return ":".join(format(v, "g") for v in value)
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


def sweep_cmd(args: argparse.Namespace) -> int:
    """Evaluate every grid point; CSV to stdout, rows in grid order."""
    try:
        axes = parse_grid_spec(args.grid)
        points = grid_points(DetectorConfig(), axes)
    except ConfigError as exc:
        _error(f"grid: {exc}")
        return EXIT_CONFIG

    try:
        manifest = load_manifest(args.manifest)
    except ManifestError as exc:
        _error(str(exc))
        return EXIT_MANIFEST
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO

    field_names = [name for name, _ in axes]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(field_names + ["tp", "fn", "fp", "tn", *METRIC_FIELDS])
    for override, cfg in points:
        try:
            preds = [predict_clip(entry, cfg) for entry in manifest]
            matrix = confusion(preds, manifest)
        except (StreamUnreadable, OSError) as exc:
            _error(str(exc))
            return EXIT_IO
        except (MalformedRecord, OrderViolation) as exc:
            _error(f"stream: {exc}")
            return EXIT_IO
        except (DuplicateClip, UnknownClip) as exc:
            _error(str(exc))
            return EXIT_MANIFEST
        report = compute_metrics(matrix)
        row = [_format_cell(override[name]) for name in field_names]
        row += [str(matrix.tp), str(matrix.fn), str(matrix.fp), str(matrix.tn)]
        row += [
            "n/a" if value is None else f"{value:.4f}"
            for value in (getattr(report, name) for name in METRIC_FIELDS)
        ]
        writer.writerow(row)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fallwatch",
        description="Pose-landmark fall detection: run, score, and tune.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="detect falls on a landmark stream")
    detect.add_argument("--input", required=True, help="stream path, or - for stdin")
    detect.add_argument("--config", default=None, help="detector config file")
    detect.set_defaults(func=detect_cmd)

    evaluate = sub.add_parser("evaluate", help="score a labeled clip manifest")
    evaluate.add_argument("--manifest", required=True, help="clip manifest (JSON)")
    evaluate.add_argument("--config", default=None, help="detector config file")
    evaluate.add_argument("--report", default=None, help="also write a JSON report here")
    evaluate.add_argument(
        "--replay", default=None, help="precomputed clip verdicts instead of detection"
    )
    evaluate.set_defaults(func=evaluate_cmd)

    sweep = sub.add_parser("sweep", help="evaluate a config grid, CSV to stdout")
    sweep.add_argument("--manifest", required=True, help="clip manifest (JSON)")
    sweep.add_argument(
        "--grid", required=True, help="grid spec: field=v1,v2,...;field2=... (weights use colons)"
    )
    sweep.set_defaults(func=sweep_cmd)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)

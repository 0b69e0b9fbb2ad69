"""posecap command line: video in, landmark JSONL out.

Exit codes: 0 clean run, 2 I/O trouble (missing or undecodable input,
unwritable output), 3 bad arguments or no usable pose model.
"""

from __future__ import annotations

import argparse
import sys

from .backends import BACKENDS, ModelUnavailable
from .extract import ExtractionJob, UndecodableVideo, extract_landmarks

EXIT_OK = 0
EXIT_IO = 2
EXIT_CONFIG = 3


def _error(message: str) -> None:
    print(f"posecap: {message}", file=sys.stderr)


def extract_cmd(args: argparse.Namespace) -> int:
    try:
        job = ExtractionJob(
            input_path=args.input,
            output_path=args.output,
            min_confidence=args.min_confidence,
            backend=args.backend,
        )
    except ValueError as exc:
        _error(f"config: {exc}")
        return EXIT_CONFIG

    try:
        count = extract_landmarks(job)
    except ModelUnavailable as exc:
        _error(str(exc))
        return EXIT_CONFIG
    except UndecodableVideo as exc:
        _error(str(exc))
        return EXIT_IO
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO

    print(f"posecap: {count} frame(s) -> {args.output}", file=sys.stderr)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posecap",
        description="Extract pose landmark streams from video.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser("extract", help="video file to landmark JSONL")
    extract.add_argument("--input", required=True, help="video file")
    extract.add_argument("--output", required=True, help="JSONL destination")
    extract.add_argument(
        "--min-confidence", type=float, default=0.5, help="detection confidence floor"
    )
    extract.add_argument(
        "--backend",
        choices=BACKENDS,
        default="mediapipe",
        help="pose model; stub runs without one",
    )
    extract.set_defaults(func=extract_cmd)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)

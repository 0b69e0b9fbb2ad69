#!/usr/bin/env python3
"""Measure detector throughput on a long synthetic stream.

Usage: python scripts/bench_throughput.py [n_frames]   (default: 100000)

Frames are materialized before timing so the numbers cover the detector
alone; pass --with-parse to time JSONL parsing plus detection instead.
"""

import sys
import time

from fallwatch.detector import FallDetector
from fallwatch.pose_stream import parse_frame_line, write_frame_line
from fallwatch.synthetic import benchmark_frames


def main() -> int:
    args = [a for a in sys.argv[1:] if not a.startswith("--")]
    with_parse = "--with-parse" in sys.argv[1:]
    n = int(args[0]) if args else 100_000

    frames = list(benchmark_frames(n))
    if with_parse:
        lines = [write_frame_line(f) for f in frames]
        detector = FallDetector()
        start = time.perf_counter()
        for line in lines:
            detector.update(parse_frame_line(line))
        elapsed = time.perf_counter() - start
        label = "parse+detect"
    else:
        detector = FallDetector()
        start = time.perf_counter()
        for frame in frames:
            detector.update(frame)
        elapsed = time.perf_counter() - start
        label = "detect"

    print(f"{label}: {n} frames in {elapsed:.3f} s = {n / elapsed:,.0f} frames/s")
    return 0


if __name__ == "__main__":
    sys.exit(main())

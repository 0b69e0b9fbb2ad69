"""Command tests, plus the end-to-end handoff to the detector CLI."""

from __future__ import annotations

import importlib.util
import json
import subprocess
import sys

import pytest

from posecap.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, main

HAVE_MEDIAPIPE = importlib.util.find_spec("mediapipe") is not None
HAVE_FALLWATCH = importlib.util.find_spec("fallwatch") is not None


def run_extract(video, out, *extra):
    return main(["extract", "--input", str(video), "--output", str(out), *extra])


def test_stub_extraction_succeeds(sample_video, tmp_path, capsys):
    out = tmp_path / "out.jsonl"
    assert run_extract(sample_video, out, "--backend", "stub") == EXIT_OK
    assert "60 frame(s)" in capsys.readouterr().err
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 60
    assert all(json.loads(line)["present"] for line in lines)


def test_bad_confidence_is_config_error(sample_video, tmp_path, capsys):
    code = run_extract(sample_video, tmp_path / "o.jsonl", "--min-confidence", "1.5")
    assert code == EXIT_CONFIG
    assert "config:" in capsys.readouterr().err


def test_missing_input_is_io_error(tmp_path, capsys):
    code = run_extract(tmp_path / "nope.mp4", tmp_path / "o.jsonl", "--backend", "stub")
    assert code == EXIT_IO
    assert "posecap:" in capsys.readouterr().err


def test_unwritable_output_is_io_error(sample_video, tmp_path):
    out = tmp_path / "missing_dir" / "o.jsonl"
    assert run_extract(sample_video, out, "--backend", "stub") == EXIT_IO


@pytest.mark.skipif(HAVE_MEDIAPIPE, reason="mediapipe is installed here")
def test_missing_model_is_config_error(sample_video, tmp_path, capsys):
    assert run_extract(sample_video, tmp_path / "o.jsonl") == EXIT_CONFIG
    assert "mediapipe" in capsys.readouterr().err


@pytest.mark.skipif(not HAVE_FALLWATCH, reason="needs the detector package")
def test_detector_consumes_extracted_stream(sample_video, tmp_path):
    out = tmp_path / "out.jsonl"
    assert run_extract(sample_video, out, "--backend", "stub") == EXIT_OK
    result = subprocess.run(
        [sys.executable, "-m", "fallwatch", "detect", "--input", str(out)],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0, result.stderr
    assert "60 frame(s)" in result.stderr

"""Config file and sweep grid parsing for the CLI.

Config files are flat ``key = value`` text, one setting per line, ``#``
comments allowed. Every key is optional and defaults to the DetectorConfig
value. ``weights`` takes six comma-separated numbers. Example:

    # tuned for a low-mounted camera
    head_floor_max = 0.2
    weights = 2, 2, 1, 1, 1, 1
    vote_threshold = 5
"""

from __future__ import annotations

import itertools
from dataclasses import fields, replace
from pathlib import Path
from typing import Any, Callable

from .detector import NUM_INDICATORS, ConfigError, DetectorConfig


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}") from None


def _parse_weights(text: str, sep: str = ",") -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(sep)]
    if len(parts) != NUM_INDICATORS:
        raise ConfigError(f"weights needs {NUM_INDICATORS} values, got {len(parts)}")
    return tuple(_parse_float(p) for p in parts)


_PARSERS: dict[str, Callable[[str], Any]] = {
    "height_ratio_max": _parse_float,
    "angle_low_deg": _parse_float,
    "angle_high_deg": _parse_float,
    "knee_ankle_max": _parse_float,
    "head_floor_max": _parse_float,
    "speed_min": _parse_float,
    "visibility_min": _parse_float,
    "buffer_len": _parse_int,
    "persistence_fraction": _parse_float,
    "weights": _parse_weights,
    "vote_threshold": _parse_float,
    "cooldown_frames": _parse_int,
    "warmup_frames": _parse_int,
}

assert set(_PARSERS) == {f.name for f in fields(DetectorConfig)}


def load_config_file(path: str | Path) -> DetectorConfig:
    """Parse a config file into a validated DetectorConfig.

    Raises ConfigError on unknown keys, unparsable values, or invariant
    violations; OSError if the file cannot be read.
    """
    overrides: dict[str, Any] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key = key.strip()
        parser = _PARSERS.get(key)
        if parser is None:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in overrides:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            overrides[key] = parser(value.strip())
        except ConfigError as exc:
            raise ConfigError(f"{path}:{lineno}: {key}: {exc}") from None
    return DetectorConfig(**overrides)


def build_config(path: str | Path | None) -> DetectorConfig:
    """Defaults when no path is given, otherwise the parsed file."""
    if path is None:
        return DetectorConfig()
    return load_config_file(path)


def parse_grid_spec(spec: str) -> list[tuple[str, list[Any]]]:
    """Parse a sweep grid: ``field=v1,v2,...;field2=...``.

    ``weights`` values separate their six numbers with colons, e.g.
    ``weights=1:1:1:1:1:1,2:2:1:1:1:1``. Fields come back sorted by name,
    values in listed order, so the product enumerates grid points in a
    deterministic lexicographic order.
    """
    axes: dict[str, list[Any]] = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        key, sep, values_text = part.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"grid entry {part!r} is not field=v1,v2,...")
        parser = _PARSERS.get(key)
        if parser is None:
            raise ConfigError(f"unknown grid field {key!r}")
        if key in axes:
            raise ConfigError(f"grid field {key!r} given twice")
        raw_values = [v.strip() for v in values_text.split(",") if v.strip()]
        if not raw_values:
            raise ConfigError(f"grid field {key!r} has no values")
        if key == "weights":
            axes[key] = [_parse_weights(v, sep=":") for v in raw_values]
        else:
            axes[key] = [parser(v) for v in raw_values]
    if not axes:
        raise ConfigError("empty grid")
    return sorted(axes.items())


def grid_points(
    base: DetectorConfig, axes: list[tuple[str, list[Any]]]
) -> list[tuple[dict[str, Any], DetectorConfig]]:
    """Materialize every grid point as (override mapping, config).

    Validates all points up front so a bad combination fails before any
    evaluation work starts.
    """
    names = [name for name, _ in axes]
    points = []
    for combo in itertools.product(*(values for _, values in axes)):
        override = dict(zip(names, combo))
        points.append((override, replace(base, **override)))
    return points

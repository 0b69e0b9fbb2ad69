"""fallwatch: streaming fall detection over pose-landmark streams.

The pipeline in one sentence: per-frame landmarks become six posture and
motion indicators, each indicator must persist across a sliding window to
count, and a weighted vote over the persistent ones raises a fall event.
"""

from .detector import (
    INDICATOR_NAMES,
    ConfigError,
    DetectorConfig,
    DetectorOutput,
    FallDetector,
    FallEvent,
    detect_stream,
    run_stream,
)
from .evaluation import (
    ClipPrediction,
    ConfusionMatrix,
    MetricsReport,
    compute_metrics,
    confusion,
    predict_clip,
    render_report,
    render_report_json,
)
from .features import Calibration, FeatureVector, extract_features
from .pose_stream import (
    ClipManifestEntry,
    Landmark,
    LandmarkIndex,
    MalformedRecord,
    ManifestError,
    OrderViolation,
    PoseFrame,
    load_manifest,
    parse_frame_line,
    read_stream,
    read_stream_path,
    write_frame_line,
    write_stream_path,
)

__version__ = "0.1.0"

__all__ = [
    "Calibration",
    "ClipManifestEntry",
    "ClipPrediction",
    "ConfigError",
    "ConfusionMatrix",
    "DetectorConfig",
    "DetectorOutput",
    "FallDetector",
    "FallEvent",
    "FeatureVector",
    "INDICATOR_NAMES",
    "Landmark",
    "LandmarkIndex",
    "MalformedRecord",
    "ManifestError",
    "MetricsReport",
    "OrderViolation",
    "PoseFrame",
    "compute_metrics",
    "confusion",
    "detect_stream",
    "extract_features",
    "load_manifest",
    "parse_frame_line",
    "predict_clip",
    "read_stream",
    "read_stream_path",
    "render_report",
    "render_report_json",
    "run_stream",
    "write_frame_line",
    "write_stream_path",
    "__version__",
]

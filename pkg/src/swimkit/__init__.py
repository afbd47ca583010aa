"""Tools for building and evaluating swimmer-detection datasets from race footage."""

from .config import Config
from .metrics import DetectionRecord, EvalReport, average_precision, evaluate, iou
from .model import (
    Annotation,
    BoundingBox,
    FrameRecord,
    RaceMetadata,
    SwimmerClass,
    Track,
    Violation,
)
from .sampling import SamplingPolicy, SubsetMethod, SubsetSpec, make_subset, select_frames
from .stats import dataset_stats, estimate_workload
from .storage import DatasetManifest, ManifestError, load_manifest, save_manifest
from .transitions import LEGAL_TRANSITIONS, is_legal_transition, legal_next_classes, validate_track

__all__ = [
    "Annotation",
    "BoundingBox",
    "Config",
    "DatasetManifest",
    "DetectionRecord",
    "EvalReport",
    "FrameRecord",
    "LEGAL_TRANSITIONS",
    "ManifestError",
    "RaceMetadata",
    "SamplingPolicy",
    "SubsetMethod",
    "SubsetSpec",
    "SwimmerClass",
    "Track",
    "Violation",
    "average_precision",
    "dataset_stats",
    "estimate_workload",
    "evaluate",
    "iou",
    "is_legal_transition",
    "legal_next_classes",
    "load_manifest",
    "make_subset",
    "save_manifest",
    "select_frames",
    "validate_track",
]

"""Annotation workload estimation and per-class dataset statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .model import FrameRecord, SwimmerClass


def round_half_up(x: float) -> int:
    """Round to nearest integer, halves away from zero (0.5 -> 1).

    Used everywhere a count is derived from a fraction, so that 10% of 3000
    frames is exactly 300 and Table-style percents match hand arithmetic.
    """
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class WorkloadEstimate:
    boxes: int
    total_seconds: float

    @property
    def total_days(self) -> float:
        return self.total_seconds / 86400.0


def estimate_workload(
    duration_s: float, fps: float, swimmers: int, seconds_per_box: float
) -> WorkloadEstimate:
    """Boxes and wall-clock time to annotate a race video exhaustively.

    One box per swimmer per frame: ``round(duration_s * fps) * swimmers``
    boxes, each costing ``seconds_per_box``.

    Raises:
        ValueError: if any input is not positive.
    """
    for name, value in (
        ("duration_s", duration_s),
        ("fps", fps),
        ("swimmers", swimmers),
        ("seconds_per_box", seconds_per_box),
    ):
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")
    boxes = round_half_up(duration_s * fps) * swimmers
    return WorkloadEstimate(boxes=boxes, total_seconds=boxes * seconds_per_box)


@dataclass(frozen=True)
class ClassStats:
    count: int
    exact_fraction: float
    rounded_percent: int


@dataclass(frozen=True)
class DatasetStats:
    per_class: dict[SwimmerClass, ClassStats]
    total: int


def dataset_stats(frames: Iterable[FrameRecord]) -> DatasetStats:
    """Count annotations by swimmer class.

    Exact fractions sum to 1 over a nonempty dataset. Rounded percents are
    reported alongside because published class tables round to whole percents
    (and, being rounded, need not sum to 100). An empty dataset reports zero
    counts and zero fractions.
    """
    counts = {cls: 0 for cls in SwimmerClass}
    for frame in frames:
        for annotation in frame.annotations:
            counts[annotation.swimmer_class] += 1
    total = sum(counts.values())
    per_class = {}
    for cls in SwimmerClass:
        fraction = counts[cls] / total if total else 0.0
        per_class[cls] = ClassStats(
            count=counts[cls],
            exact_fraction=fraction,
            rounded_percent=round_half_up(fraction * 100),
        )
    return DatasetStats(per_class=per_class, total=total)


def stats_from_counts(counts: dict[SwimmerClass, int]) -> DatasetStats:
    """Same report, starting from precomputed per-class counts."""
    total = sum(counts.values())
    per_class = {}
    for cls in SwimmerClass:
        count = counts.get(cls, 0)
        fraction = count / total if total else 0.0
        per_class[cls] = ClassStats(
            count=count,
            exact_fraction=fraction,
            rounded_percent=round_half_up(fraction * 100),
        )
    return DatasetStats(per_class=per_class, total=total)

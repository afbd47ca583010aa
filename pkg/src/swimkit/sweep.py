"""Subset-size sweep: evaluate external detector runs across data fractions.

Training detectors is out of scope; a sweep consumes one detection file per
(subset method, fraction, test pool) cell, produced by whatever detector the
user trained on that subset, and evaluates each against the pool's ground
truth. Test pools are venues: a detector trained on one pool is typically
tested both on held-out frames of the same pool and on frames from a
different pool.

Run files live in one directory and are named
``<method>_<percent>_<pool>.tsv``, e.g. ``random_25_bloomington.tsv``
(method is ``random`` or ``stratified``, percent is the fraction times 100,
pool is the venue slug: lowercased, spaces to hyphens).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .metrics import DetectionRecord, evaluate
from .model import FrameRecord, SwimmerClass
from .sampling import SubsetMethod
from .storage import DatasetManifest, load_detections


@dataclass(frozen=True)
class SweepRow:
    method: str
    fraction: float
    test_pool: str
    per_class_ap: dict[SwimmerClass, float]
    mean_ap: float
    tracking_ap: float


def pool_slug(venue_name: str) -> str:
    return venue_name.strip().lower().replace(" ", "-")


def fraction_label(fraction: float) -> str:
    """Fraction as a percent string: 0.01 -> '1', 0.25 -> '25', 1.0 -> '100'."""
    return f"{fraction * 100:g}"


def run_filename(method: SubsetMethod | str, fraction: float, pool: str) -> str:
    method_name = method.value if isinstance(method, SubsetMethod) else method
    return f"{method_name}_{fraction_label(fraction)}_{pool_slug(pool)}.tsv"


def discover_runs(
    runs_dir: str | Path,
    fractions: list[float],
    methods: list[SubsetMethod],
    pools: list[str],
) -> dict[tuple[str, float, str], list[DetectionRecord]]:
    """Load every expected run file, or fail listing all the absent cells."""
    runs_dir = Path(runs_dir)
    missing = []
    runs = {}
    for method in methods:
        for fraction in fractions:
            for pool in pools:
                path = runs_dir / run_filename(method, fraction, pool)
                if not path.exists():
                    missing.append((method.value, fraction, pool))
                    continue
                runs[(method.value, fraction, pool)] = load_detections(path)
    if missing:
        listing = ", ".join(f"({m}, {fraction_label(f)}%, {p})" for m, f, p in missing)
        raise FileNotFoundError(f"missing detection run files: {listing}")
    return runs


def pools_of(manifest: DatasetManifest) -> dict[str, list[FrameRecord]]:
    """Ground-truth frames grouped by venue (the test-pool tag)."""
    frames_by_pool: dict[str, list[FrameRecord]] = {}
    for frame in manifest.frames:
        venue = manifest.videos[frame.video_id].venue_name
        frames_by_pool.setdefault(pool_slug(venue), []).append(frame)
    return frames_by_pool


def run_sweep(
    manifest: DatasetManifest,
    runs: dict[tuple[str, float, str], list[DetectionRecord]],
    iou_threshold: float = 0.5,
) -> list[SweepRow]:
    """Evaluate every run cell against its pool's ground truth.

    Rows come back sorted by (method, fraction, pool) so output files are
    deterministic.
    """
    frames_by_pool = pools_of(manifest)
    rows = []
    for (method, fraction, pool), detections in sorted(runs.items()):
        slug = pool_slug(pool)
        if slug not in frames_by_pool:
            raise ValueError(f"no ground-truth frames for test pool {pool!r}")
        report = evaluate(frames_by_pool[slug], detections, iou_threshold)
        rows.append(
            SweepRow(
                method=method,
                fraction=fraction,
                test_pool=slug,
                per_class_ap=report.per_class_ap,
                mean_ap=report.mean_ap,
                tracking_ap=report.tracking_ap,
            )
        )
    return rows


def write_sweep_csv(rows: list[SweepRow], path: str | Path) -> None:
    """One row per (method, fraction, pool) with AP columns per class."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["method", "fraction", "test_pool"]
            + [cls.value for cls in SwimmerClass]
            + ["mAP", "tracking"]
        )
        for row in rows:
            writer.writerow(
                [row.method, fraction_label(row.fraction), row.test_pool]
                + [
                    f"{row.per_class_ap[cls]:.6f}" if cls in row.per_class_ap else ""
                    for cls in SwimmerClass
                ]
                + [f"{row.mean_ap:.6f}", f"{row.tracking_ap:.6f}"]
            )


def write_sweep_long_csv(rows: list[SweepRow], path: str | Path) -> None:
    """Long format for plotting AP-vs-fraction curves split by pool and class."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "fraction", "test_pool", "class", "AP"])
        for row in rows:
            for cls in SwimmerClass:
                if cls in row.per_class_ap:
                    writer.writerow(
                        [
                            row.method,
                            fraction_label(row.fraction),
                            row.test_pool,
                            cls.value,
                            f"{row.per_class_ap[cls]:.6f}",
                        ]
                    )
            writer.writerow(
                [
                    row.method,
                    fraction_label(row.fraction),
                    row.test_pool,
                    "tracking",
                    f"{row.tracking_ap:.6f}",
                ]
            )

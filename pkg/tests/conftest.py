"""Shared builders for synthetic frames, videos and manifests."""

from __future__ import annotations

import random


def pytest_runtest_logreport(report):
    # one visible verdict line per acceptance check
    if report.when == "call" and "test_acceptance" in report.nodeid:
        word = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\nacceptance {word}: {name}", flush=True)

from swimkit.model import (
    Annotation,
    BoundingBox,
    CameraHeight,
    CameraPosition,
    Course,
    FrameRecord,
    Gender,
    Lighting,
    RaceMetadata,
    Stroke,
    SwimmerClass,
    Track,
)
from swimkit.storage import DatasetManifest


def make_metadata(**overrides) -> RaceMetadata:
    base = dict(
        venue_name="Bloomington",
        course=Course.LCM,
        lane_count=8,
        lighting=Lighting.INDOOR,
        bulkhead_present=False,
        block_style="wedge",
        camera_height=CameraHeight.POOL_LEVEL,
        camera_position=CameraPosition.DIVE_VIEW,
        stroke=Stroke.FREESTYLE,
        race_distance_m=100,
        gender=Gender.FEMALE,
        age_group="senior",
        flags_present=True,
        fps=30.0,
    )
    base.update(overrides)
    return RaceMetadata(**base)


def make_annotation(
    track_id: str = "t1",
    swimmer_class: SwimmerClass = SwimmerClass.SWIMMING,
    box: BoundingBox | None = None,
    lane: int = 0,
    **kwargs,
) -> Annotation:
    return Annotation(
        box=box or BoundingBox(10.0, 10.0, 50.0, 40.0),
        swimmer_class=swimmer_class,
        lane=lane,
        track_id=track_id,
        **kwargs,
    )


def make_frame(
    frame_id: str = "f0",
    video_id: str = "v0",
    frame_index: int = 0,
    annotations=(),
    width_px: int = 1280,
    height_px: int = 720,
) -> FrameRecord:
    return FrameRecord(
        frame_id=frame_id,
        video_id=video_id,
        frame_index=frame_index,
        timestamp_s=frame_index / 30.0,
        image_path=f"frames/{frame_id}.png",
        width_px=width_px,
        height_px=height_px,
        annotations=list(annotations),
    )


def make_manifest(frames, videos=None, dataset_id="test-dataset") -> DatasetManifest:
    if videos is None:
        videos = {"v0": make_metadata()}
    return DatasetManifest(dataset_id=dataset_id, videos=videos, frames=list(frames))


def random_int_box(rng: random.Random, limit: int = 100) -> BoundingBox:
    """Integer-corner box within [0, limit]^2, positive area."""
    x0, x1 = sorted(rng.sample(range(0, limit + 1), 2))
    y0, y1 = sorted(rng.sample(range(0, limit + 1), 2))
    return BoundingBox(float(x0), float(y0), float(x1), float(y1))


def random_dyadic_box(
    rng: random.Random, width: int = 1280, height: int = 720, denom: int = 256
) -> BoundingBox:
    """Box whose coordinates are multiples of 1/denom (denom a power of two).

    All canvas-style fractional pixel coordinates are dyadic rationals, and
    subtracting them from an integer frame width is exact in IEEE doubles, so
    these are the right inputs for exactness tests.
    """

    def coord(limit: int) -> float:
        return rng.randrange(0, limit * denom + 1) / denom

    x0, x1 = sorted((coord(width), coord(width)))
    y0, y1 = sorted((coord(height), coord(height)))
    if x0 == x1:
        x1 = min(x0 + 1.0 / denom, float(width))
        x0 = x1 - 1.0 / denom
    if y0 == y1:
        y1 = min(y0 + 1.0 / denom, float(height))
        y0 = y1 - 1.0 / denom
    return BoundingBox(x0, y0, x1, y1)


def tracks_of(frames) -> list[Track]:
    """Reconstruct per-video tracks from frame annotations, observations sorted."""
    grouped: dict[tuple[str, str], list[tuple[int, SwimmerClass, int]]] = {}
    for frame in frames:
        for a in frame.annotations:
            grouped.setdefault((frame.video_id, a.track_id), []).append(
                (frame.frame_index, a.swimmer_class, a.lane)
            )
    tracks = []
    for (_, track_id), items in sorted(grouped.items()):
        items.sort(key=lambda item: item[0])
        tracks.append(
            Track(
                track_id=track_id,
                lane=items[0][2],
                observations=tuple((idx, cls) for idx, cls, _ in items),
            )
        )
    return tracks

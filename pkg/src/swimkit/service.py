"""HTTP annotation service.

Binds the domain rules into the human labelling workflow: the browser UI (or
any client) reads frames, writes annotations, and is told immediately when an
edit would break an invariant. Nothing invalid can be persisted through this
API; every write revalidates the touched annotations and the full class
sequence of every affected track.

Writes use optimistic concurrency: each frame carries a version counter, a
PUT must name the version it read, and a mismatch is rejected with 409 and
the current version. Annotators rarely collide, so conflicts are loud instead
of locked. All mutations to the in-memory manifest are serialized through one
lock; reads are lock-free on snapshots.
"""

from __future__ import annotations

import threading
import time
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import Config, data_root
from .model import (
    Annotation,
    BoundingBox,
    FrameRecord,
    SwimmerClass,
    Track,
    validate_annotation,
)
from .sampling import SamplingPolicy, next_frame_index
from .stats import dataset_stats, estimate_workload
from .storage import DatasetManifest, ManifestError, parse_annotation, save_manifest
from .transitions import legal_next_classes, validate_track


class VersionConflict(Exception):
    def __init__(self, current_version: int):
        self.current_version = current_version
        super().__init__(f"stale version; frame is at {current_version}")


class AnnotationStore:
    """In-memory manifest with validated, version-checked mutation."""

    def __init__(self, manifest: DatasetManifest, config: Config | None = None):
        self.config = config or Config()
        self._lock = threading.Lock()
        self._manifest = manifest
        self._frames = {f.frame_id: f for f in manifest.frames}
        self.session_started_at = time.monotonic()
        self.boxes_written = 0

    @property
    def manifest(self) -> DatasetManifest:
        with self._lock:
            return replace(
                self._manifest, frames=[self._frames[fid] for fid in sorted(self._frames)]
            )

    def get_frame(self, frame_id: str) -> FrameRecord | None:
        return self._frames.get(frame_id)

    def track_observations(
        self, video_id: str, track_id: str, frames: dict[str, FrameRecord]
    ) -> list[tuple[int, SwimmerClass]]:
        obs = []
        for frame in frames.values():
            if frame.video_id != video_id:
                continue
            for a in frame.annotations:
                if a.track_id == track_id:
                    obs.append((frame.frame_index, a.swimmer_class))
        # key on the index alone: duplicated track ids can put two
        # observations at one index, and enum members do not order
        return sorted(obs, key=lambda item: item[0])

    def legal_next(self, video_id: str, track_id: str, frame_index: int) -> set[SwimmerClass]:
        """Classes the track may take at ``frame_index``.

        Uses the most recent observation before the frame. A track with no
        history may only start on the blocks when the frame precedes the
        recorded race start; entering mid-race (camera cuts, relay exchanges)
        leaves every class open.
        """
        prior: tuple[int, SwimmerClass] | None = None
        for idx, cls in self.track_observations(video_id, track_id, self._frames):
            if idx < frame_index and (prior is None or idx > prior[0]):
                prior = (idx, cls)
        if prior is not None:
            return legal_next_classes(prior[1])
        meta = self._manifest.videos.get(video_id)
        start = meta.race_start_frame_index if meta else None
        if start is not None and frame_index < start:
            return {SwimmerClass.ON_BLOCKS}
        return set(SwimmerClass)

    def validate_put(
        self, frame: FrameRecord, annotations: list[Annotation]
    ) -> list:
        """All violations the proposed annotation list would introduce."""
        candidate = replace(frame, annotations=annotations)
        violations = []
        for a in annotations:
            violations.extend(validate_annotation(a, candidate))

        # revalidate the class sequence of every track touched by this edit
        frames = dict(self._frames)
        frames[frame.frame_id] = candidate
        touched = {a.track_id for a in annotations} | {
            a.track_id for a in frame.annotations
        }
        for track_id in sorted(touched):
            obs = self.track_observations(frame.video_id, track_id, frames)
            if not obs:
                continue
            lanes = [a.lane for a in annotations if a.track_id == track_id]
            track = Track(
                track_id=track_id, lane=lanes[0] if lanes else 0, observations=tuple(obs)
            )
            violations.extend(validate_track(track))
        return violations

    def put_annotations(
        self, frame_id: str, annotations: list[Annotation], expected_version: int
    ) -> FrameRecord:
        """Validated compare-and-swap write of a frame's annotation list.

        Raises:
            KeyError: unknown frame.
            VersionConflict: expected_version is stale.
            ValueError: carries the violation list when validation fails.
        """
        with self._lock:
            frame = self._frames.get(frame_id)
            if frame is None:
                raise KeyError(frame_id)
            if frame.version != expected_version:
                raise VersionConflict(frame.version)
            violations = self.validate_put(frame, annotations)
            if violations:
                exc = ValueError("validation failed")
                exc.violations = violations
                raise exc
            added = len(annotations) - len(frame.annotations)
            updated = replace(
                frame, annotations=list(annotations), version=frame.version + 1
            )
            self._frames[frame_id] = updated
            self.boxes_written += max(added, 0)
            return updated

    def progress(self) -> dict:
        boxes_done = sum(len(f.annotations) for f in self._frames.values())
        estimated = 0
        for video_id, meta in self._manifest.videos.items():
            frames = [f for f in self._frames.values() if f.video_id == video_id]
            if not frames:
                continue
            duration_s = (max(f.frame_index for f in frames) + 1) / meta.fps
            estimated += estimate_workload(
                duration_s, meta.fps, meta.lane_count, self.config.seconds_per_box
            ).boxes
        elapsed = time.monotonic() - self.session_started_at
        stats = dataset_stats(self._frames.values())
        return {
            "boxes_done": boxes_done,
            "boxes_estimated": estimated,
            "session_elapsed_s": round(elapsed, 3),
            "session_seconds_per_box": (
                round(elapsed / self.boxes_written, 3) if self.boxes_written else None
            ),
            "class_counts": {
                cls.value: s.count for cls, s in stats.per_class.items()
            },
            "class_percents": {
                cls.value: s.rounded_percent for cls, s in stats.per_class.items()
            },
        }


def _frame_payload(frame: FrameRecord) -> dict:
    return {
        "frame_id": frame.frame_id,
        "video_id": frame.video_id,
        "frame_index": frame.frame_index,
        "timestamp_s": frame.timestamp_s,
        "image_path": frame.image_path,
        "width_px": frame.width_px,
        "height_px": frame.height_px,
        "version": frame.version,
        "annotations": [
            {
                "box": [a.box.x_min, a.box.y_min, a.box.x_max, a.box.y_max],
                "swimmer_class": a.swimmer_class.value,
                "lane": a.lane,
                "track_id": a.track_id,
                "visible_fraction": a.visible_fraction,
                "truncated_by_camera": a.truncated_by_camera,
            }
            for a in sorted(frame.annotations, key=lambda a: a.track_id)
        ],
    }


def _parse_annotations_payload(raw) -> list[Annotation]:
    if not isinstance(raw, list):
        raise ManifestError("$.annotations", "expected a list")
    return [
        parse_annotation(item, f"$.annotations[{i}]") for i, item in enumerate(raw)
    ]


def create_app(
    store: AnnotationStore,
    manifest_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="swimkit annotation service")
    app.state.store = store

    @app.get("/api/videos")
    def list_videos():
        manifest = store.manifest
        return {
            "dataset_id": manifest.dataset_id,
            "videos": [
                {
                    "video_id": vid,
                    "venue_name": meta.venue_name,
                    "stroke": meta.stroke.value,
                    "race_distance_m": meta.race_distance_m,
                    "fps": meta.fps,
                    "lane_count": meta.lane_count,
                    "dive_ranges": [list(r) for r in meta.dive_ranges],
                    "race_start_frame_index": meta.race_start_frame_index,
                    "frame_count": len(manifest.frames_of(vid)),
                    "frame_ids": [f.frame_id for f in manifest.frames_of(vid)],
                }
                for vid, meta in sorted(manifest.videos.items())
            ],
        }

    @app.get("/api/classes")
    def list_classes():
        # hotkey order: 1..6 down the race
        return {"classes": [cls.value for cls in SwimmerClass]}

    @app.get("/api/frames/{frame_id}")
    def get_frame(frame_id: str):
        frame = store.get_frame(frame_id)
        if frame is None:
            return JSONResponse(
                status_code=404, content={"error": "unknown_frame", "frame_id": frame_id}
            )
        return {"frame": _frame_payload(frame)}

    @app.get("/api/frames/{frame_id}/image")
    def get_frame_image(frame_id: str):
        frame = store.get_frame(frame_id)
        if frame is None:
            return JSONResponse(
                status_code=404, content={"error": "unknown_frame", "frame_id": frame_id}
            )
        path = data_root() / frame.image_path
        if not path.exists():
            return JSONResponse(
                status_code=404,
                content={"error": "image_not_found", "image_path": frame.image_path},
            )
        return FileResponse(path)

    @app.put("/api/frames/{frame_id}/annotations")
    async def put_annotations(frame_id: str, request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "expected_version" not in body:
            return JSONResponse(
                status_code=400,
                content={"error": "bad_request", "detail": "expected_version required"},
            )
        try:
            annotations = _parse_annotations_payload(body.get("annotations", []))
        except ManifestError as exc:
            return JSONResponse(
                status_code=400, content={"error": "bad_request", "detail": str(exc)}
            )
        try:
            frame = store.put_annotations(
                frame_id, annotations, int(body["expected_version"])
            )
        except KeyError:
            return JSONResponse(
                status_code=404, content={"error": "unknown_frame", "frame_id": frame_id}
            )
        except VersionConflict as exc:
            return JSONResponse(
                status_code=409,
                content={
                    "error": "version_conflict",
                    "current_version": exc.current_version,
                },
            )
        except ValueError as exc:
            return JSONResponse(
                status_code=422,
                content={
                    "error": "validation_failed",
                    "violations": [v.to_dict() for v in getattr(exc, "violations", [])],
                },
            )
        if manifest_path is not None:
            save_manifest(store.manifest, manifest_path)
        return {"frame_id": frame_id, "version": frame.version}

    @app.get("/api/videos/{video_id}/next_frame")
    def next_frame(video_id: str, after_index: int | None = None):
        manifest = store.manifest
        if video_id not in manifest.videos:
            return JSONResponse(
                status_code=404, content={"error": "unknown_video", "video_id": video_id}
            )
        meta = manifest.videos[video_id]
        frames = manifest.frames_of(video_id)
        policy = SamplingPolicy(
            base_stride=store.config.base_stride, dive_stride=store.config.dive_stride
        )
        idx = next_frame_index(
            [f.frame_index for f in frames], after_index, policy, list(meta.dive_ranges)
        )
        if idx is None:
            return JSONResponse(status_code=404, content={"error": "no_more_frames"})
        frame = next(f for f in frames if f.frame_index == idx)
        return {"frame_id": frame.frame_id, "frame_index": frame.frame_index}

    @app.get("/api/videos/{video_id}/tracks/{track_id}/legal_next")
    def legal_next(video_id: str, track_id: str, frame_index: int):
        manifest = store.manifest
        if video_id not in manifest.videos:
            return JSONResponse(
                status_code=404, content={"error": "unknown_video", "video_id": video_id}
            )
        classes = store.legal_next(video_id, track_id, frame_index)
        return {"classes": sorted(c.value for c in classes)}

    @app.get("/api/progress")
    def progress():
        return store.progress()

    @app.post("/api/save")
    def save():
        if manifest_path is None:
            return JSONResponse(
                status_code=400, content={"error": "no_manifest_path_configured"}
            )
        save_manifest(store.manifest, manifest_path)
        return {"saved": str(manifest_path)}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

"""Dataset manifest persistence and interchange formats.

The native manifest is versioned JSON: human-readable, diffable, and
deliberately boring, because annotation data outlives any one tool. Saving is
byte-stable (frames ordered by frame index then id, annotations by track id)
so identical datasets produce identical files.

Interchange formats are lossy by design and round-trip within documented
tolerances: Darknet label files carry normalized centers at six decimals
(<= 1e-4 error), VOC XML carries integer 1-indexed inclusive pixel corners
(<= 1 px error). Neither carries lane or track identity.

Frame images are referenced by relative path; extracting frames from video is
an external preprocessing step, e.g.:

    ffmpeg -i race.mp4 -vsync 0 frames/%06d.png
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .model import (
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
    validate_annotation,
)
from .metrics import DetectionRecord

FORMAT_VERSION = "1"


class ManifestError(ValueError):
    """Schema or invariant violation, pointing at the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class DatasetManifest:
    dataset_id: str
    videos: dict[str, RaceMetadata] = field(default_factory=dict)
    frames: list[FrameRecord] = field(default_factory=list)
    checklist_tags: list[str] = field(default_factory=list)
    format_version: str = FORMAT_VERSION

    def frames_of(self, video_id: str) -> list[FrameRecord]:
        return sorted(
            (f for f in self.frames if f.video_id == video_id),
            key=lambda f: f.frame_index,
        )


# --- native JSON manifest ---------------------------------------------------


def _box_to_list(box: BoundingBox) -> list[float]:
    return [box.x_min, box.y_min, box.x_max, box.y_max]


def _annotation_to_dict(a: Annotation) -> dict:
    return {
        "box": _box_to_list(a.box),
        "swimmer_class": a.swimmer_class.value,
        "lane": a.lane,
        "track_id": a.track_id,
        "visible_fraction": a.visible_fraction,
        "truncated_by_camera": a.truncated_by_camera,
    }


def _frame_to_dict(f: FrameRecord) -> dict:
    return {
        "frame_id": f.frame_id,
        "video_id": f.video_id,
        "frame_index": f.frame_index,
        "timestamp_s": f.timestamp_s,
        "image_path": f.image_path,
        "width_px": f.width_px,
        "height_px": f.height_px,
        "version": f.version,
        "annotations": [
            _annotation_to_dict(a)
            for a in sorted(f.annotations, key=lambda a: a.track_id)
        ],
    }


def _metadata_to_dict(m: RaceMetadata) -> dict:
    return {
        "venue_name": m.venue_name,
        "course": m.course.value,
        "lane_count": m.lane_count,
        "lighting": m.lighting.value,
        "bulkhead_present": m.bulkhead_present,
        "block_style": m.block_style,
        "camera_height": m.camera_height.value,
        "camera_position": m.camera_position.value,
        "stroke": m.stroke.value,
        "race_distance_m": m.race_distance_m,
        "gender": m.gender.value,
        "age_group": m.age_group,
        "flags_present": m.flags_present,
        "fps": m.fps,
        "depth_tag": m.depth_tag,
        "dive_ranges": [list(r) for r in m.dive_ranges],
        "race_start_frame_index": m.race_start_frame_index,
    }


def manifest_to_dict(manifest: DatasetManifest) -> dict:
    return {
        "format_version": manifest.format_version,
        "dataset_id": manifest.dataset_id,
        "videos": {
            vid: _metadata_to_dict(manifest.videos[vid])
            for vid in sorted(manifest.videos)
        },
        "checklist_tags": list(manifest.checklist_tags),
        "frames": [
            _frame_to_dict(f)
            for f in sorted(manifest.frames, key=lambda f: (f.frame_index, f.frame_id))
        ],
    }


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    payload = json.dumps(manifest_to_dict(manifest), indent=2)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def _expect(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise ManifestError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ManifestError(f"{path}.{key}", f"expected number, got {value!r}")
        return float(value)
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ManifestError(f"{path}.{key}", f"expected integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise ManifestError(
            f"{path}.{key}", f"expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _parse_enum(enum_cls, raw: str, path: str):
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ManifestError(path, f"{raw!r} not one of: {allowed}") from None


def parse_annotation(obj: dict, path: str) -> Annotation:
    if not isinstance(obj, dict):
        raise ManifestError(path, "expected object")
    raw_box = _expect(obj, "box", list, path)
    if len(raw_box) != 4 or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw_box
    ):
        raise ManifestError(f"{path}.box", f"expected four numbers, got {raw_box!r}")
    return Annotation(
        box=BoundingBox(*(float(v) for v in raw_box)),
        swimmer_class=_parse_enum(
            SwimmerClass,
            _expect(obj, "swimmer_class", str, path),
            f"{path}.swimmer_class",
        ),
        lane=_expect(obj, "lane", int, path),
        track_id=_expect(obj, "track_id", str, path),
        visible_fraction=_expect(obj, "visible_fraction", float, path),
        truncated_by_camera=_expect(obj, "truncated_by_camera", bool, path),
    )


def _parse_frame(obj: dict, path: str) -> FrameRecord:
    if not isinstance(obj, dict):
        raise ManifestError(path, "expected object")
    annotations = [
        parse_annotation(a, f"{path}.annotations[{i}]")
        for i, a in enumerate(_expect(obj, "annotations", list, path))
    ]
    return FrameRecord(
        frame_id=_expect(obj, "frame_id", str, path),
        video_id=_expect(obj, "video_id", str, path),
        frame_index=_expect(obj, "frame_index", int, path),
        timestamp_s=_expect(obj, "timestamp_s", float, path),
        image_path=_expect(obj, "image_path", str, path),
        width_px=_expect(obj, "width_px", int, path),
        height_px=_expect(obj, "height_px", int, path),
        version=_expect(obj, "version", int, path),
        annotations=annotations,
    )


def _parse_metadata(obj: dict, path: str) -> RaceMetadata:
    if not isinstance(obj, dict):
        raise ManifestError(path, "expected object")
    raw_ranges = obj.get("dive_ranges", [])
    if not isinstance(raw_ranges, list):
        raise ManifestError(f"{path}.dive_ranges", "expected list")
    dive_ranges = []
    for i, pair in enumerate(raw_ranges):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ManifestError(f"{path}.dive_ranges[{i}]", f"expected [start, end], got {pair!r}")
        dive_ranges.append((int(pair[0]), int(pair[1])))
    race_start = obj.get("race_start_frame_index")
    if race_start is not None and (not isinstance(race_start, int) or isinstance(race_start, bool)):
        raise ManifestError(f"{path}.race_start_frame_index", f"expected integer or null, got {race_start!r}")
    lane_count = _expect(obj, "lane_count", int, path)
    if lane_count < 1:
        raise ManifestError(f"{path}.lane_count", f"must be >= 1, got {lane_count}")
    fps = _expect(obj, "fps", float, path)
    if fps <= 0:
        raise ManifestError(f"{path}.fps", f"must be positive, got {fps}")
    race_distance = _expect(obj, "race_distance_m", int, path)
    if race_distance <= 0:
        raise ManifestError(f"{path}.race_distance_m", f"must be positive, got {race_distance}")
    return RaceMetadata(
        venue_name=_expect(obj, "venue_name", str, path),
        course=_parse_enum(Course, _expect(obj, "course", str, path), f"{path}.course"),
        lane_count=lane_count,
        lighting=_parse_enum(Lighting, _expect(obj, "lighting", str, path), f"{path}.lighting"),
        bulkhead_present=_expect(obj, "bulkhead_present", bool, path),
        block_style=_expect(obj, "block_style", str, path),
        camera_height=_parse_enum(
            CameraHeight, _expect(obj, "camera_height", str, path), f"{path}.camera_height"
        ),
        camera_position=_parse_enum(
            CameraPosition, _expect(obj, "camera_position", str, path), f"{path}.camera_position"
        ),
        stroke=_parse_enum(Stroke, _expect(obj, "stroke", str, path), f"{path}.stroke"),
        race_distance_m=race_distance,
        gender=_parse_enum(Gender, _expect(obj, "gender", str, path), f"{path}.gender"),
        age_group=_expect(obj, "age_group", str, path),
        flags_present=_expect(obj, "flags_present", bool, path),
        fps=fps,
        depth_tag=str(obj.get("depth_tag", "")),
        dive_ranges=tuple(dive_ranges),
        race_start_frame_index=race_start,
    )


def manifest_from_dict(data: dict) -> DatasetManifest:
    if not isinstance(data, dict):
        raise ManifestError("$", "manifest root must be an object")
    version = _expect(data, "format_version", str, "$")
    if version != FORMAT_VERSION:
        raise ManifestError("$.format_version", f"unsupported version {version!r}")
    videos = {
        vid: _parse_metadata(meta, f"$.videos[{vid!r}]")
        for vid, meta in _expect(data, "videos", dict, "$").items()
    }
    frames = [
        _parse_frame(f, f"$.frames[{i}]")
        for i, f in enumerate(_expect(data, "frames", list, "$"))
    ]
    manifest = DatasetManifest(
        dataset_id=_expect(data, "dataset_id", str, "$"),
        videos=videos,
        frames=frames,
        checklist_tags=list(_expect(data, "checklist_tags", list, "$")),
        format_version=version,
    )
    _check_manifest_invariants(manifest)
    return manifest


def _check_manifest_invariants(manifest: DatasetManifest) -> None:
    seen: dict[str, int] = {}
    for i, frame in enumerate(manifest.frames):
        if frame.frame_id in seen:
            raise ManifestError(
                f"$.frames[{i}].frame_id",
                f"duplicate frame_id {frame.frame_id!r} (also at frames[{seen[frame.frame_id]}])",
            )
        seen[frame.frame_id] = i
        if frame.video_id not in manifest.videos:
            raise ManifestError(
                f"$.frames[{i}].video_id", f"unknown video {frame.video_id!r}"
            )
        for j, annotation in enumerate(frame.annotations):
            violations = validate_annotation(annotation, frame)
            if violations:
                raise ManifestError(
                    f"$.frames[{i}].annotations[{j}]", violations[0].message
                )


def load_manifest(path: str | Path) -> DatasetManifest:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError("$", f"not valid JSON: {exc}") from exc
    return manifest_from_dict(data)


# --- Darknet labels ----------------------------------------------------------


def export_darknet(
    manifest: DatasetManifest,
    out_dir: str | Path,
    class_order: list[SwimmerClass] | None = None,
) -> Path:
    """Write one `<frame_id>.txt` per frame plus a `classes.names` file.

    Lines are `class_index cx cy w h`, center/size normalized by frame
    dimensions at six decimals.

    Raises:
        ValueError: for a bad class order or a zero-dimension frame.
    """
    order = class_order or list(SwimmerClass)
    if sorted(order, key=lambda c: c.value) != sorted(SwimmerClass, key=lambda c: c.value):
        raise ValueError("class_order must be a permutation of the six classes")
    index = {cls: i for i, cls in enumerate(order)}
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "classes.names").write_text(
        "".join(f"{cls.value}\n" for cls in order), encoding="utf-8"
    )
    for frame in sorted(manifest.frames, key=lambda f: (f.frame_index, f.frame_id)):
        if frame.width_px <= 0 or frame.height_px <= 0:
            raise ValueError(f"frame {frame.frame_id!r} has zero dimension")
        lines = []
        for a in sorted(frame.annotations, key=lambda a: a.track_id):
            cx = (a.box.x_min + a.box.x_max) / 2 / frame.width_px
            cy = (a.box.y_min + a.box.y_max) / 2 / frame.height_px
            w = a.box.width / frame.width_px
            h = a.box.height / frame.height_px
            lines.append(
                f"{index[a.swimmer_class]} {cx:.6f} {cy:.6f} {w:.6f} {h:.6f}\n"
            )
        (out / f"{frame.frame_id}.txt").write_text("".join(lines), encoding="utf-8")
    return out


def import_darknet(
    label_dir: str | Path, frames: Iterable[FrameRecord]
) -> dict[str, list[tuple[SwimmerClass, BoundingBox]]]:
    """Read Darknet labels back into pixel boxes, keyed by frame id.

    Frames provide the pixel dimensions for denormalization; lane and track
    identity do not exist in this format.
    """
    label_dir = Path(label_dir)
    names = (label_dir / "classes.names").read_text(encoding="utf-8").split()
    order = [SwimmerClass(name) for name in names]
    result = {}
    for frame in frames:
        label_path = label_dir / f"{frame.frame_id}.txt"
        boxes = []
        if label_path.exists():
            for line in label_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                idx, cx, cy, w, h = line.split()
                cx, cy, w, h = float(cx), float(cy), float(w), float(h)
                boxes.append(
                    (
                        order[int(idx)],
                        BoundingBox(
                            x_min=(cx - w / 2) * frame.width_px,
                            y_min=(cy - h / 2) * frame.height_px,
                            x_max=(cx + w / 2) * frame.width_px,
                            y_max=(cy + h / 2) * frame.height_px,
                        ),
                    )
                )
        result[frame.frame_id] = boxes
    return result


# --- Pascal VOC XML ----------------------------------------------------------


def export_voc_xml(manifest: DatasetManifest, out_dir: str | Path) -> Path:
    """Write one `<frame_id>.xml` per frame with VOC object fields.

    Corners are integer, 1-indexed, inclusive: a full-frame box becomes
    (1, 1, W, H). The `truncated` flag mirrors `truncated_by_camera`;
    `difficult` is always 0.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for frame in sorted(manifest.frames, key=lambda f: (f.frame_index, f.frame_id)):
        if frame.width_px <= 0 or frame.height_px <= 0:
            raise ValueError(f"frame {frame.frame_id!r} has zero dimension")
        root = ET.Element("annotation")
        ET.SubElement(root, "filename").text = frame.image_path
        size = ET.SubElement(root, "size")
        ET.SubElement(size, "width").text = str(frame.width_px)
        ET.SubElement(size, "height").text = str(frame.height_px)
        ET.SubElement(size, "depth").text = "3"
        for a in sorted(frame.annotations, key=lambda a: a.track_id):
            obj = ET.SubElement(root, "object")
            ET.SubElement(obj, "name").text = a.swimmer_class.value
            ET.SubElement(obj, "truncated").text = "1" if a.truncated_by_camera else "0"
            ET.SubElement(obj, "difficult").text = "0"
            bndbox = ET.SubElement(obj, "bndbox")
            ET.SubElement(bndbox, "xmin").text = str(round(a.box.x_min) + 1)
            ET.SubElement(bndbox, "ymin").text = str(round(a.box.y_min) + 1)
            ET.SubElement(bndbox, "xmax").text = str(round(a.box.x_max))
            ET.SubElement(bndbox, "ymax").text = str(round(a.box.y_max))
        ET.indent(root)
        (out / f"{frame.frame_id}.xml").write_text(
            ET.tostring(root, encoding="unicode") + "\n", encoding="utf-8"
        )
    return out


def import_voc_xml(
    xml_dir: str | Path, frame_ids: Iterable[str]
) -> dict[str, list[tuple[SwimmerClass, BoundingBox, bool]]]:
    """Read VOC XML back into 0-indexed continuous boxes, keyed by frame id."""
    xml_dir = Path(xml_dir)
    result = {}
    for frame_id in frame_ids:
        root = ET.parse(xml_dir / f"{frame_id}.xml").getroot()
        boxes = []
        for obj in root.findall("object"):
            bndbox = obj.find("bndbox")
            boxes.append(
                (
                    SwimmerClass(obj.findtext("name")),
                    BoundingBox(
                        x_min=float(bndbox.findtext("xmin")) - 1,
                        y_min=float(bndbox.findtext("ymin")) - 1,
                        x_max=float(bndbox.findtext("xmax")),
                        y_max=float(bndbox.findtext("ymax")),
                    ),
                    obj.findtext("truncated") == "1",
                )
            )
        result[frame_id] = boxes
    return result


# --- detection result files --------------------------------------------------


def load_detections(path: str | Path) -> list[DetectionRecord]:
    """Read tab-separated detector output.

    One record per line: frame_id, class name, confidence, x_min, y_min,
    x_max, y_max.
    """
    records = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 7:
            raise ValueError(f"{path}:{lineno}: expected 7 tab-separated fields, got {len(parts)}")
        frame_id, cls_name, conf, x_min, y_min, x_max, y_max = parts
        records.append(
            DetectionRecord(
                frame_id=frame_id,
                swimmer_class=SwimmerClass(cls_name),
                confidence=float(conf),
                box=BoundingBox(float(x_min), float(y_min), float(x_max), float(y_max)),
            )
        )
    return records


def save_detections(records: list[DetectionRecord], path: str | Path) -> None:
    lines = [
        f"{r.frame_id}\t{r.swimmer_class.value}\t{r.confidence}"
        f"\t{r.box.x_min}\t{r.box.y_min}\t{r.box.x_max}\t{r.box.y_max}\n"
        for r in records
    ]
    Path(path).write_text("".join(lines), encoding="utf-8")

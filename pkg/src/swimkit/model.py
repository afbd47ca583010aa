"""Domain types for annotated swim-race footage.

Everything here is a plain value type. Boxes and annotations are allowed to
hold invalid data (an annotator mid-drag produces invalid boxes all the time);
the ``validate_*`` functions are the single place where the rules live, and
they return :class:`Violation` lists rather than raising so callers can show
every problem at once.

Coordinates are continuous pixels, origin top-left, y growing downward. The
upper box edge is exclusive for area math, which keeps IoU free of the usual
plus-or-minus-one-pixel ambiguity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

# Annotators may not box a swimmer who is more than ~90% hidden or cut off,
# so anything estimated below this visible fraction is an invalid annotation.
MIN_VISIBLE_FRACTION = 0.10


class SwimmerClass(Enum):
    """The six per-frame swimmer states, in race order."""

    ON_BLOCKS = "on_blocks"
    DIVING = "diving"
    UNDERWATER = "underwater"
    SWIMMING = "swimming"
    TURNING = "turning"
    FINISHING = "finishing"

    def __str__(self) -> str:
        return self.value


class Course(Enum):
    LCM = "LCM"
    SCM = "SCM"
    SCY = "SCY"


class Lighting(Enum):
    INDOOR = "indoor"
    OUTDOOR_DAY = "outdoor_day"
    OUTDOOR_NIGHT = "outdoor_night"


class CameraHeight(Enum):
    POOL_LEVEL = "pool_level"
    VIEWING_LEVEL = "viewing_level"


class CameraPosition(Enum):
    DIVE_VIEW = "dive_view"
    MID_POOL_VIEW = "mid_pool_view"
    TURN_VIEW = "turn_view"


class Stroke(Enum):
    FREESTYLE = "freestyle"
    BACKSTROKE = "backstroke"
    BREASTSTROKE = "breaststroke"
    BUTTERFLY = "butterfly"
    MEDLEY = "medley"


class Gender(Enum):
    FEMALE = "female"
    MALE = "male"
    MIXED = "mixed"


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle in frame pixel coordinates."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def is_valid(self) -> bool:
        coords = (self.x_min, self.y_min, self.x_max, self.y_max)
        if not all(math.isfinite(c) for c in coords):
            return False
        if min(coords) < 0:
            return False
        return self.x_min < self.x_max and self.y_min < self.y_max


@dataclass(frozen=True)
class Annotation:
    """One swimmer instance in one frame.

    ``visible_fraction`` is the annotator's estimate of how much of the
    swimmer is unoccluded/untruncated, in (0, 1].
    """

    box: BoundingBox
    swimmer_class: SwimmerClass
    lane: int
    track_id: str
    visible_fraction: float = 1.0
    truncated_by_camera: bool = False


@dataclass(frozen=True)
class FrameRecord:
    """One extracted video frame with its annotations.

    ``version`` increases on every successful edit and backs the optimistic
    concurrency check in the annotation service.
    """

    frame_id: str
    video_id: str
    frame_index: int
    timestamp_s: float
    image_path: str
    width_px: int
    height_px: int
    annotations: list[Annotation] = field(default_factory=list)
    version: int = 0


@dataclass(frozen=True)
class RaceMetadata:
    """Venue/camera/race descriptors for one video, used by sampling and coverage.

    ``dive_ranges`` are frame-index intervals (inclusive) that contain diving,
    annotated at a finer stride. ``race_start_frame_index`` is the first frame
    at which the race is underway; frames before it can only show swimmers on
    the blocks. Both are optional because they are only known after a first
    viewing pass.
    """

    venue_name: str
    course: Course
    lane_count: int
    lighting: Lighting
    bulkhead_present: bool
    block_style: str
    camera_height: CameraHeight
    camera_position: CameraPosition
    stroke: Stroke
    race_distance_m: int
    gender: Gender
    age_group: str
    flags_present: bool
    fps: float
    depth_tag: str = ""
    dive_ranges: tuple[tuple[int, int], ...] = ()
    race_start_frame_index: int | None = None


@dataclass(frozen=True)
class Track:
    """Ordered per-frame class observations for one swimmer in one race."""

    track_id: str
    lane: int
    observations: tuple[tuple[int, SwimmerClass], ...]


@dataclass(frozen=True)
class Violation:
    """A single broken rule, with enough context to point at the culprit."""

    code: str
    message: str
    track_id: str | None = None
    frame_indices: tuple[int, int] | None = None
    classes: tuple[SwimmerClass, SwimmerClass] | None = None

    def to_dict(self) -> dict:
        out: dict = {"code": self.code, "message": self.message}
        if self.track_id is not None:
            out["track_id"] = self.track_id
        if self.frame_indices is not None:
            out["frame_indices"] = list(self.frame_indices)
        if self.classes is not None:
            out["classes"] = [c.value for c in self.classes]
        return out


def validate_box(box: BoundingBox, width_px: int, height_px: int) -> list[Violation]:
    """Check a box against frame bounds and the positive-area rule."""
    violations = []
    coords = (box.x_min, box.y_min, box.x_max, box.y_max)
    if not all(math.isfinite(c) for c in coords):
        violations.append(Violation("non_finite", f"box has non-finite coordinates: {coords}"))
        return violations
    if box.x_min >= box.x_max or box.y_min >= box.y_max:
        violations.append(
            Violation("non_positive_area", f"box has non-positive area: {coords}")
        )
    # check all four coordinates against both edges: an inverted box can put
    # its nominal "min" beyond the frame
    if (
        min(box.x_min, box.x_max) < 0
        or min(box.y_min, box.y_max) < 0
        or max(box.x_min, box.x_max) > width_px
        or max(box.y_min, box.y_max) > height_px
    ):
        violations.append(
            Violation(
                "out_of_bounds",
                f"box {coords} outside frame bounds {width_px}x{height_px}",
            )
        )
    return violations


def validate_annotation(annotation: Annotation, frame: FrameRecord) -> list[Violation]:
    """Check one annotation against its frame.

    Flags out-of-bounds or degenerate boxes, a visible fraction below the
    do-not-annotate threshold, and a duplicate track id within the frame.
    The minimal-box tightness rule and the <=5% pixel-slack allowance are
    annotator guidance only; they cannot be machine-checked without masks.
    """
    violations = [
        Violation(v.code, v.message, track_id=annotation.track_id)
        for v in validate_box(annotation.box, frame.width_px, frame.height_px)
    ]
    if not (0 < annotation.visible_fraction <= 1):
        violations.append(
            Violation(
                "visible_fraction_out_of_range",
                f"visible_fraction {annotation.visible_fraction} not in (0, 1]",
                track_id=annotation.track_id,
            )
        )
    elif annotation.visible_fraction < MIN_VISIBLE_FRACTION:
        violations.append(
            Violation(
                "below_visibility_threshold",
                f"visible_fraction {annotation.visible_fraction} below "
                f"{MIN_VISIBLE_FRACTION}; swimmers this hidden are not boxed",
                track_id=annotation.track_id,
            )
        )
    if annotation.lane < 0:
        violations.append(
            Violation(
                "negative_lane",
                f"lane {annotation.lane} is negative",
                track_id=annotation.track_id,
            )
        )
    same_track = sum(1 for a in frame.annotations if a.track_id == annotation.track_id)
    if same_track > 1:
        violations.append(
            Violation(
                "duplicate_track_id",
                f"track {annotation.track_id!r} appears {same_track} times in "
                f"frame {frame.frame_id}",
                track_id=annotation.track_id,
            )
        )
    return violations


def validate_frame(frame: FrameRecord) -> list[Violation]:
    """Validate every annotation in a frame, including cross-annotation rules."""
    violations = []
    for annotation in frame.annotations:
        violations.extend(validate_annotation(annotation, frame))
    # duplicate_track_id is reported once per annotation above; dedupe here
    seen = set()
    unique = []
    for v in violations:
        key = (v.code, v.track_id, v.message)
        if key not in seen:
            seen.add(key)
            unique.append(v)
    return unique

"""Variance-coverage audit over dataset race metadata.

A detector only generalizes across pools if its training data spans the ways
pools, cameras and races differ, so this report counts what a dataset has
observed along each variance dimension and lists what is still missing.

Gaps carry a severity. "required" marks the items the methodology insists on:
all three courses, the three typical camera setups, and per venue all four
strokes plus both a sprint and a distance race. "advisory" marks softer
variety items (flags moved or not, bulkheads, block styles, age and gender
spread) that are desirable but not mandatory.

Sprint vs distance is categorized by race distance using a nominal pace of
0.6 s/m: sprints are races up to 100 m (roughly 30-60 s), distance races
800 m and up (roughly 8-15 min). Races in between count toward neither.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .model import CameraHeight, CameraPosition, Course, Gender, Lighting, Stroke
from .storage import DatasetManifest

SPRINT_MAX_DISTANCE_M = 100
DISTANCE_MIN_DISTANCE_M = 800

# the camera setups footage is commonly available in
TYPICAL_CAMERA_COMBOS = (
    (CameraHeight.POOL_LEVEL, CameraPosition.DIVE_VIEW),
    (CameraHeight.VIEWING_LEVEL, CameraPosition.MID_POOL_VIEW),
    (CameraHeight.POOL_LEVEL, CameraPosition.TURN_VIEW),
)

# the four strokes every venue needs an example of; medley races are labeled
# as their own stroke and do not stand in for any single one
REQUIRED_STROKES = (
    Stroke.FREESTYLE,
    Stroke.BACKSTROKE,
    Stroke.BREASTSTROKE,
    Stroke.BUTTERFLY,
)

REQUIRED = "required"
ADVISORY = "advisory"


@dataclass(frozen=True)
class Gap:
    scope: str  # "dataset" or a venue name
    dimension: str
    missing: str
    severity: str
    note: str = ""


@dataclass
class CoverageReport:
    observed: dict[str, Counter] = field(default_factory=dict)
    per_venue_observed: dict[str, dict[str, Counter]] = field(default_factory=dict)
    gaps: list[Gap] = field(default_factory=list)

    def required_gaps(self) -> list[Gap]:
        return [g for g in self.gaps if g.severity == REQUIRED]


def race_pace_category(race_distance_m: int) -> str:
    if race_distance_m <= SPRINT_MAX_DISTANCE_M:
        return "sprint"
    if race_distance_m >= DISTANCE_MIN_DISTANCE_M:
        return "distance"
    return "middle"


def _camera_combo(height: CameraHeight, position: CameraPosition) -> str:
    return f"{height.value}@{position.value}"


def coverage_report(manifests: list[DatasetManifest]) -> CoverageReport:
    """Audit observed metadata values and list unobserved required ones.

    Pure function of the metadata; pixels are never consulted.
    """
    report = CoverageReport()
    observed: dict[str, Counter] = {
        dim: Counter()
        for dim in (
            "course",
            "lighting",
            "bulkhead",
            "block_style",
            "depth_tag",
            "lane_count",
            "flags",
            "camera_combo",
            "stroke",
            "pace",
            "gender",
            "age_group",
        )
    }
    venues: dict[str, dict[str, Counter]] = {}

    for manifest in manifests:
        for meta in manifest.videos.values():
            venue = venues.setdefault(
                meta.venue_name,
                {"stroke": Counter(), "pace": Counter(), "camera_combo": Counter()},
            )
            combo = _camera_combo(meta.camera_height, meta.camera_position)
            pace = race_pace_category(meta.race_distance_m)
            observed["course"][meta.course.value] += 1
            observed["lighting"][meta.lighting.value] += 1
            observed["bulkhead"]["present" if meta.bulkhead_present else "absent"] += 1
            if meta.block_style:
                observed["block_style"][meta.block_style] += 1
            if meta.depth_tag:
                observed["depth_tag"][meta.depth_tag] += 1
            observed["lane_count"][str(meta.lane_count)] += 1
            observed["flags"]["present" if meta.flags_present else "absent"] += 1
            observed["camera_combo"][combo] += 1
            observed["stroke"][meta.stroke.value] += 1
            observed["pace"][pace] += 1
            observed["gender"][meta.gender.value] += 1
            if meta.age_group:
                observed["age_group"][meta.age_group] += 1
            venue["stroke"][meta.stroke.value] += 1
            venue["pace"][pace] += 1
            venue["camera_combo"][combo] += 1

    gaps: list[Gap] = []

    def dataset_gap(dimension, missing, severity, note=""):
        gaps.append(Gap("dataset", dimension, missing, severity, note))

    for course in Course:
        if not observed["course"][course.value]:
            dataset_gap("course", course.value, REQUIRED)
    for height, position in TYPICAL_CAMERA_COMBOS:
        combo = _camera_combo(height, position)
        if not observed["camera_combo"][combo]:
            dataset_gap("camera_combo", combo, REQUIRED, "typical camera setup unseen")
    for lighting in Lighting:
        if not observed["lighting"][lighting.value]:
            dataset_gap("lighting", lighting.value, ADVISORY)
    for state in ("present", "absent"):
        if not observed["bulkhead"][state]:
            dataset_gap("bulkhead", state, ADVISORY)
        if not observed["flags"][state]:
            dataset_gap(
                "flags",
                state,
                ADVISORY,
                "not every competition moves the flags",
            )
    for gender in (Gender.FEMALE, Gender.MALE):
        if not observed["gender"][gender.value]:
            dataset_gap("gender", gender.value, ADVISORY)
    for dimension in ("block_style", "depth_tag", "lane_count", "age_group"):
        if len(observed[dimension]) < 2:
            dataset_gap(dimension, "variety", ADVISORY, "fewer than two distinct values")

    for venue_name in sorted(venues):
        venue = venues[venue_name]
        for stroke in REQUIRED_STROKES:
            if not venue["stroke"][stroke.value]:
                gaps.append(Gap(venue_name, "stroke", stroke.value, REQUIRED))
        for pace in ("sprint", "distance"):
            if not venue["pace"][pace]:
                gaps.append(Gap(venue_name, "pace", pace, REQUIRED))
        for height, position in TYPICAL_CAMERA_COMBOS:
            combo = _camera_combo(height, position)
            if not venue["camera_combo"][combo]:
                gaps.append(Gap(venue_name, "camera_combo", combo, REQUIRED))

    report.observed = observed
    report.per_venue_observed = venues
    report.gaps = gaps
    return report


def render_report(report: CoverageReport) -> str:
    lines = ["OBSERVED VALUES", "==============="]
    for dimension in sorted(report.observed):
        counts = report.observed[dimension]
        if not counts:
            lines.append(f"{dimension}: (none)")
            continue
        summary = ", ".join(f"{v}={n}" for v, n in sorted(counts.items()))
        lines.append(f"{dimension}: {summary}")
    lines += ["", "GAPS", "===="]
    if not report.gaps:
        lines.append("none - every checked value is covered")
    for gap in report.gaps:
        note = f"  ({gap.note})" if gap.note else ""
        lines.append(f"[{gap.severity}] {gap.scope}: {gap.dimension} missing {gap.missing}{note}")
    return "\n".join(lines) + "\n"


def report_to_csv_rows(report: CoverageReport) -> list[list[str]]:
    rows = [["kind", "scope", "dimension", "value", "count_or_severity", "note"]]
    for dimension in sorted(report.observed):
        for value, count in sorted(report.observed[dimension].items()):
            rows.append(["observed", "dataset", dimension, value, str(count), ""])
    for gap in report.gaps:
        rows.append(["gap", gap.scope, gap.dimension, gap.missing, gap.severity, gap.note])
    return rows

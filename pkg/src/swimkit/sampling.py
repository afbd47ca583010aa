"""Frame-sampling policies and subset generation for data-reduction runs.

Two distinct jobs live here. ``select_frames`` decides which frames get
annotated in the first place: every Nth frame, except inside declared diving
intervals where a finer stride applies (dives are short and fast, so they are
sampled more densely). ``make_subset`` shrinks an already-annotated dataset to
a percentage, either uniformly over frames or stratified so every class keeps
the same share of its annotations.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .model import FrameRecord, SwimmerClass
from .stats import round_half_up


@dataclass(frozen=True)
class SamplingPolicy:
    """Annotate every ``base_stride``-th frame, every ``dive_stride``-th inside dives."""

    base_stride: int = 15
    dive_stride: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.base_stride < 1 or self.dive_stride < 1:
            raise ValueError("strides must be >= 1")
        if self.dive_stride > self.base_stride:
            raise ValueError(
                f"dive_stride {self.dive_stride} must not exceed "
                f"base_stride {self.base_stride}"
            )


class SubsetMethod(Enum):
    RANDOM_FRAMES = "random"
    STRATIFIED_BY_CLASS = "stratified"


@dataclass(frozen=True)
class SubsetSpec:
    method: SubsetMethod
    fraction: float
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.fraction <= 1:
            raise ValueError(f"fraction must be in (0, 1], got {self.fraction}")


def _check_ranges(dive_ranges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    ordered = sorted(dive_ranges)
    for start, end in ordered:
        if start > end:
            raise ValueError(f"malformed dive range ({start}, {end})")
    for (_, end_a), (start_b, _) in zip(ordered, ordered[1:]):
        if start_b <= end_a:
            raise ValueError(f"overlapping dive ranges at index {start_b}")
    return ordered


def select_frames(
    frame_indices: list[int],
    policy: SamplingPolicy,
    dive_ranges: list[tuple[int, int]] | None = None,
) -> list[int]:
    """Pick the frame indices to annotate under a stride policy.

    Keeps indices divisible by ``base_stride`` outside the (inclusive) dive
    ranges and indices divisible by ``dive_stride`` inside them. Output is
    sorted and deduplicated.

    Raises:
        ValueError: for overlapping or inverted dive ranges.
    """
    ranges = _check_ranges(list(dive_ranges or []))

    def in_dive(idx: int) -> bool:
        return any(start <= idx <= end for start, end in ranges)

    selected = {
        idx
        for idx in frame_indices
        if idx % (policy.dive_stride if in_dive(idx) else policy.base_stride) == 0
    }
    return sorted(selected)


def next_frame_index(
    frame_indices: list[int],
    after: int | None,
    policy: SamplingPolicy,
    dive_ranges: list[tuple[int, int]] | None = None,
) -> int | None:
    """First sampled index strictly after ``after`` (or the very first one)."""
    for idx in select_frames(frame_indices, policy, dive_ranges):
        if after is None or idx > after:
            return idx
    return None


def dominant_class(frame: FrameRecord, rarity: dict[SwimmerClass, int]) -> SwimmerClass | None:
    """The stratum a frame belongs to: its most frequent annotation class.

    Ties go to the globally rarer class so that scarce classes (diving is the
    smallest slice of a typical collection) are not swallowed by common ones.
    Frames with no annotations have no dominant class.
    """
    if not frame.annotations:
        return None
    counts = Counter(a.swimmer_class for a in frame.annotations)
    best = max(counts.items(), key=lambda kv: (kv[1], -rarity.get(kv[0], 0)))
    return best[0]


def make_subset(frames: list[FrameRecord], spec: SubsetSpec) -> list[str]:
    """Select a subset of frame ids at ``spec.fraction`` of the dataset.

    RANDOM_FRAMES draws ``round(fraction * len(frames))`` frames uniformly
    without replacement. STRATIFIED_BY_CLASS buckets frames by dominant class
    and draws ``round(fraction * len(bucket))`` from each bucket, so every
    class keeps (to rounding) the same share. Deterministic for a fixed seed.

    Raises:
        ValueError: on an empty frame list.
    """
    if not frames:
        raise ValueError("cannot subset an empty frame list")
    rng = random.Random(spec.seed)

    if spec.method is SubsetMethod.RANDOM_FRAMES:
        k = round_half_up(spec.fraction * len(frames))
        chosen = rng.sample(frames, k)
        return [f.frame_id for f in sorted(chosen, key=lambda f: f.frame_id)]

    # global class counts drive the rare-class tie-break
    rarity: Counter[SwimmerClass] = Counter()
    for frame in frames:
        rarity.update(a.swimmer_class for a in frame.annotations)

    strata: dict[SwimmerClass | None, list[FrameRecord]] = {}
    for frame in frames:
        strata.setdefault(dominant_class(frame, rarity), []).append(frame)

    chosen = []
    for _, members in sorted(
        strata.items(), key=lambda kv: "" if kv[0] is None else kv[0].value
    ):
        k = round_half_up(spec.fraction * len(members))
        chosen.extend(rng.sample(members, k))
    return [f.frame_id for f in sorted(chosen, key=lambda f: f.frame_id)]

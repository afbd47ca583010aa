"""Stride-based frame selection and fractional subset generation."""

from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swimkit.model import SwimmerClass
from swimkit.sampling import (
    SamplingPolicy,
    SubsetMethod,
    SubsetSpec,
    dominant_class,
    make_subset,
    next_frame_index,
    select_frames,
)
from swimkit.stats import round_half_up

from conftest import make_annotation, make_frame

C = SwimmerClass


class TestSamplingPolicy:
    def test_defaults(self):
        policy = SamplingPolicy()
        assert policy.base_stride == 15 and policy.dive_stride == 5

    def test_rejects_bad_strides(self):
        with pytest.raises(ValueError):
            SamplingPolicy(base_stride=0)
        with pytest.raises(ValueError):
            SamplingPolicy(base_stride=5, dive_stride=15)


class TestSelectFrames:
    def test_base_stride_only(self):
        out = select_frames(list(range(100)), SamplingPolicy(base_stride=15, dive_stride=5))
        assert out == [0, 15, 30, 45, 60, 75, 90]

    def test_dive_range_uses_finer_stride(self):
        policy = SamplingPolicy(base_stride=15, dive_stride=5)
        out = select_frames(list(range(100)), policy, dive_ranges=[(20, 40)])
        # inside [20, 40] multiples of 5, outside multiples of 15
        assert out == [0, 15, 20, 25, 30, 35, 40, 45, 60, 75, 90]

    def test_dive_range_boundaries_inclusive(self):
        policy = SamplingPolicy(base_stride=10, dive_stride=2)
        out = select_frames(list(range(30)), policy, dive_ranges=[(4, 8)])
        assert 4 in out and 8 in out and 6 in out
        assert 2 not in out and 12 not in out

    def test_collection_stride_three(self):
        # raw footage is thinned to every third frame before annotation
        out = select_frames(list(range(10)), SamplingPolicy(base_stride=3, dive_stride=3))
        assert out == [0, 3, 6, 9]

    def test_unsorted_input_with_duplicates(self):
        out = select_frames([30, 0, 15, 30, 7], SamplingPolicy())
        assert out == [0, 15, 30]

    def test_bad_ranges_rejected(self):
        with pytest.raises(ValueError, match="malformed"):
            select_frames([0], SamplingPolicy(), dive_ranges=[(10, 5)])
        with pytest.raises(ValueError, match="overlap"):
            select_frames([0], SamplingPolicy(), dive_ranges=[(0, 10), (5, 20)])

    def test_touching_ranges_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            select_frames([0], SamplingPolicy(), dive_ranges=[(0, 10), (10, 20)])

    @given(
        st.lists(st.integers(0, 5000), max_size=200),
        st.integers(1, 30),
    )
    def test_selected_indices_divide_by_stride(self, indices, stride):
        policy = SamplingPolicy(base_stride=stride, dive_stride=min(stride, 5))
        out = select_frames(indices, policy)
        assert out == sorted(set(out))
        assert set(out) <= set(indices)
        for idx in out:
            assert idx % stride == 0


class TestNextFrameIndex:
    def test_walks_the_sampled_sequence(self):
        indices = list(range(100))
        policy = SamplingPolicy(base_stride=15, dive_stride=5)
        assert next_frame_index(indices, None, policy) == 0
        assert next_frame_index(indices, 0, policy) == 15
        assert next_frame_index(indices, 90, policy) is None

    def test_respects_dive_ranges(self):
        indices = list(range(100))
        policy = SamplingPolicy(base_stride=15, dive_stride=5)
        assert next_frame_index(indices, 15, policy, [(20, 40)]) == 20
        assert next_frame_index(indices, 20, policy, [(20, 40)]) == 25


class TestDominantClass:
    def test_majority_wins(self):
        frame = make_frame(
            annotations=[
                make_annotation(track_id="a", swimmer_class=C.SWIMMING),
                make_annotation(track_id="b", swimmer_class=C.SWIMMING),
                make_annotation(track_id="c", swimmer_class=C.DIVING),
            ]
        )
        assert dominant_class(frame, {C.SWIMMING: 100, C.DIVING: 1}) is C.SWIMMING

    def test_tie_breaks_to_globally_rarer(self):
        frame = make_frame(
            annotations=[
                make_annotation(track_id="a", swimmer_class=C.SWIMMING),
                make_annotation(track_id="b", swimmer_class=C.DIVING),
            ]
        )
        assert dominant_class(frame, {C.SWIMMING: 100, C.DIVING: 1}) is C.DIVING
        assert dominant_class(frame, {C.SWIMMING: 1, C.DIVING: 100}) is C.SWIMMING

    def test_unannotated_frame_has_none(self):
        assert dominant_class(make_frame(), {}) is None


def synthetic_frames(n, seed=0, classes=tuple(SwimmerClass)):
    rng = random.Random(seed)
    frames = []
    for i in range(n):
        cls = rng.choice(classes)
        frames.append(
            make_frame(
                frame_id=f"f{i:05d}",
                frame_index=i,
                annotations=[make_annotation(track_id=f"t{i}", swimmer_class=cls)],
            )
        )
    return frames


class TestMakeSubset:
    def test_random_subset_size_and_determinism(self):
        frames = synthetic_frames(200)
        spec = SubsetSpec(SubsetMethod.RANDOM_FRAMES, 0.25, seed=7)
        first = make_subset(frames, spec)
        assert len(first) == 50
        assert first == make_subset(frames, spec)
        assert first != make_subset(frames, SubsetSpec(SubsetMethod.RANDOM_FRAMES, 0.25, seed=8))

    def test_random_subset_is_sorted_unique_frame_ids(self):
        frames = synthetic_frames(100)
        ids = make_subset(frames, SubsetSpec(SubsetMethod.RANDOM_FRAMES, 0.5, seed=1))
        assert ids == sorted(set(ids))

    def test_full_fraction_returns_everything(self):
        frames = synthetic_frames(40)
        for method in SubsetMethod:
            ids = make_subset(frames, SubsetSpec(method, 1.0, seed=3))
            assert ids == sorted(f.frame_id for f in frames)

    def test_stratified_keeps_per_class_share(self):
        frames = synthetic_frames(400, seed=11)
        by_id = {f.frame_id: f for f in frames}
        rarity = Counter(a.swimmer_class for f in frames for a in f.annotations)
        strata = Counter(dominant_class(f, rarity) for f in frames)
        ids = make_subset(frames, SubsetSpec(SubsetMethod.STRATIFIED_BY_CLASS, 0.25, seed=5))
        picked = Counter(dominant_class(by_id[i], rarity) for i in ids)
        for stratum, total in strata.items():
            assert picked[stratum] == round_half_up(0.25 * total)

    def test_unannotated_frames_form_their_own_stratum(self):
        frames = synthetic_frames(90, seed=2) + [
            make_frame(frame_id=f"empty{i}", frame_index=1000 + i) for i in range(10)
        ]
        ids = make_subset(frames, SubsetSpec(SubsetMethod.STRATIFIED_BY_CLASS, 0.5, seed=4))
        empties = [i for i in ids if i.startswith("empty")]
        assert len(empties) == 5

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            make_subset([], SubsetSpec(SubsetMethod.RANDOM_FRAMES, 0.5))

    def test_bad_fraction_rejected(self):
        with pytest.raises(ValueError):
            SubsetSpec(SubsetMethod.RANDOM_FRAMES, 0.0)
        with pytest.raises(ValueError):
            SubsetSpec(SubsetMethod.RANDOM_FRAMES, 1.2)

    @settings(max_examples=25)
    @given(
        n=st.integers(1, 120),
        fraction=st.sampled_from([0.01, 0.02, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0]),
        seed=st.integers(0, 1000),
    )
    def test_random_sizes_follow_rounding(self, n, fraction, seed):
        frames = synthetic_frames(n, seed=seed)
        ids = make_subset(frames, SubsetSpec(SubsetMethod.RANDOM_FRAMES, fraction, seed=seed))
        assert len(ids) == round_half_up(fraction * n)

"""Workload arithmetic and per-class statistics."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from swimkit.model import SwimmerClass
from swimkit.stats import (
    dataset_stats,
    estimate_workload,
    round_half_up,
    stats_from_counts,
)

from conftest import make_annotation, make_frame

C = SwimmerClass


class TestRoundHalfUp:
    def test_halves_round_up(self):
        assert round_half_up(0.5) == 1
        assert round_half_up(1.5) == 2
        assert round_half_up(2.5) == 3  # banker's rounding would give 2

    def test_plain_cases(self):
        assert round_half_up(0.49) == 0
        assert round_half_up(10.0) == 10

    @given(st.integers(0, 10**6), st.integers(1, 1000))
    def test_matches_exact_rational_half_up(self, numerator, denominator):
        # floor(x + 1/2) in exact arithmetic is the definition of half-up for
        # non-negative x; denominators <= 1000 keep float error far smaller
        # than the closest a non-half quotient can sit to a half boundary
        expected = math.floor(Fraction(numerator, denominator) + Fraction(1, 2))
        assert round_half_up(numerator / denominator) == expected


class TestEstimateWorkload:
    def test_full_race_example(self):
        estimate = estimate_workload(960, 30, 8, 2)
        assert estimate.boxes == 230_400
        assert estimate.total_seconds == 460_800
        assert estimate.total_days > 5

    def test_fractional_duration_rounds_frames(self):
        assert estimate_workload(1.02, 30, 1, 2).boxes == 31  # 30.6 frames

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(duration_s=0, fps=30, swimmers=8, seconds_per_box=2),
            dict(duration_s=60, fps=-1, swimmers=8, seconds_per_box=2),
            dict(duration_s=60, fps=30, swimmers=0, seconds_per_box=2),
            dict(duration_s=60, fps=30, swimmers=8, seconds_per_box=0),
        ],
    )
    def test_non_positive_inputs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            estimate_workload(**kwargs)


TABLE_COUNTS = {
    C.ON_BLOCKS: 2344,
    C.DIVING: 1124,
    C.SWIMMING: 13009,
    C.UNDERWATER: 2997,
    C.TURNING: 1558,
    C.FINISHING: 3534,
}


class TestDatasetStats:
    def test_published_style_count_table(self):
        stats = stats_from_counts(TABLE_COUNTS)
        assert stats.total == 24_566
        percents = {cls: s.rounded_percent for cls, s in stats.per_class.items()}
        assert percents == {
            C.ON_BLOCKS: 10,
            C.DIVING: 5,
            C.SWIMMING: 53,
            C.UNDERWATER: 12,
            C.TURNING: 6,
            C.FINISHING: 14,
        }

    def test_exact_fractions_sum_to_one(self):
        stats = stats_from_counts(TABLE_COUNTS)
        assert sum(s.exact_fraction for s in stats.per_class.values()) == pytest.approx(1.0)

    def test_counting_from_frames(self):
        frames = [
            make_frame(
                frame_id="f0",
                annotations=[
                    make_annotation(track_id="a", swimmer_class=C.DIVING),
                    make_annotation(track_id="b", swimmer_class=C.SWIMMING),
                ],
            ),
            make_frame(
                frame_id="f1",
                frame_index=1,
                annotations=[make_annotation(track_id="a", swimmer_class=C.SWIMMING)],
            ),
        ]
        stats = dataset_stats(frames)
        assert stats.total == 3
        assert stats.per_class[C.SWIMMING].count == 2
        assert stats.per_class[C.DIVING].count == 1
        assert stats.per_class[C.TURNING].count == 0

    def test_empty_dataset(self):
        stats = dataset_stats([])
        assert stats.total == 0
        for cls in SwimmerClass:
            assert stats.per_class[cls].count == 0
            assert stats.per_class[cls].exact_fraction == 0.0

    @given(st.dictionaries(st.sampled_from(list(SwimmerClass)), st.integers(0, 10**6)))
    def test_rounded_percents_within_one_of_exact(self, counts):
        stats = stats_from_counts(counts)
        for s in stats.per_class.values():
            assert abs(s.rounded_percent - s.exact_fraction * 100) <= 0.5

"""Geometric and photometric augmentation, with exact box propagation."""

from __future__ import annotations

import random

import numpy as np
import pytest

from swimkit.augment import (
    flip_horizontal,
    flip_image,
    jitter_image,
    photometric_jitter,
    shear_perspective,
    transform_box,
    warp_image,
)
from swimkit.model import BoundingBox, SwimmerClass

from conftest import make_annotation, make_frame, random_dyadic_box
from oracles import dense_hull

IDENTITY = np.eye(3)


class TestFlip:
    def test_flip_mirrors_coordinates(self):
        frame = make_frame(
            width_px=100,
            annotations=[make_annotation(box=BoundingBox(10.0, 5.0, 30.0, 25.0))],
        )
        (a,) = flip_horizontal(frame).annotations
        assert a.box == BoundingBox(70.0, 5.0, 90.0, 25.0)

    def test_involution_exact_on_dyadic_boxes(self):
        # canvas coordinates are dyadic rationals; for them W - (W - x) == x
        # holds bit-for-bit in IEEE doubles
        rng = random.Random(1234)
        frame = make_frame(
            annotations=[
                make_annotation(track_id=f"t{i}", box=random_dyadic_box(rng))
                for i in range(1000)
            ]
        )
        twice = flip_horizontal(flip_horizontal(frame))
        for original, restored in zip(frame.annotations, twice.annotations):
            assert original.box == restored.box

    def test_lane_renumbering(self):
        frame = make_frame(annotations=[make_annotation(lane=0), ])
        assert flip_horizontal(frame, lane_count=8).annotations[0].lane == 7
        assert flip_horizontal(frame, lane_count=None).annotations[0].lane == 0

    def test_lane_renumbering_is_involution(self):
        frame = make_frame(annotations=[make_annotation(lane=2)])
        twice = flip_horizontal(flip_horizontal(frame, lane_count=8), lane_count=8)
        assert twice.annotations[0].lane == 2

    def test_class_and_track_untouched(self):
        frame = make_frame(
            annotations=[make_annotation(track_id="t7", swimmer_class=SwimmerClass.TURNING)]
        )
        (a,) = flip_horizontal(frame).annotations
        assert a.track_id == "t7" and a.swimmer_class is SwimmerClass.TURNING

    def test_flip_image_mirrors_columns(self):
        image = np.arange(24, dtype=np.uint8).reshape(2, 4, 3)
        flipped = flip_image(image)
        assert np.array_equal(flipped[:, 0], image[:, -1])
        assert np.array_equal(flip_image(flipped), image)


class TestTransformBox:
    def test_identity_is_bit_stable(self):
        rng = random.Random(77)
        for _ in range(200):
            box = random_dyadic_box(rng)
            assert transform_box(box, IDENTITY) == box

    def test_pure_translation(self):
        h = np.array([[1, 0, 10], [0, 1, -5], [0, 0, 1]], dtype=float)
        out = transform_box(BoundingBox(0.0, 10.0, 20.0, 30.0), h)
        assert out == BoundingBox(10.0, 5.0, 30.0, 25.0)

    def test_hull_matches_dense_sampling_oracle(self):
        rng = random.Random(4242)
        for _ in range(100):
            box = random_dyadic_box(rng, width=600, height=400)
            # mild random perspective: near-identity with small off-terms
            h = np.eye(3)
            h[0, 1] = rng.uniform(-0.3, 0.3)
            h[1, 0] = rng.uniform(-0.3, 0.3)
            h[0, 2] = rng.uniform(-50, 50)
            h[1, 2] = rng.uniform(-50, 50)
            h[2, 0] = rng.uniform(-1e-4, 1e-4)
            h[2, 1] = rng.uniform(-1e-4, 1e-4)
            got = transform_box(box, h)
            expected = dense_hull(box, h)
            for attr in ("x_min", "y_min", "x_max", "y_max"):
                assert getattr(got, attr) == pytest.approx(getattr(expected, attr), abs=1e-6)

    def test_corner_at_infinity_rejected(self):
        h = np.array([[1, 0, 0], [0, 1, 0], [-1, 0, 10]], dtype=float)
        # corner x=10 maps to w = -10 + 10 = 0
        with pytest.raises(ValueError, match="infinity"):
            transform_box(BoundingBox(10.0, 0.0, 20.0, 5.0), h)


class TestShearPerspective:
    def test_identity_keeps_annotations_bit_identical(self):
        rng = random.Random(9)
        frame = make_frame(
            annotations=[
                make_annotation(track_id=f"t{i}", box=random_dyadic_box(rng))
                for i in range(50)
            ]
        )
        out = shear_perspective(frame, IDENTITY)
        assert out.annotations == frame.annotations

    def test_boxes_clipped_to_frame(self):
        h = np.array([[1, 0, -30], [0, 1, 0], [0, 0, 1]], dtype=float)
        frame = make_frame(
            width_px=100,
            height_px=100,
            annotations=[make_annotation(box=BoundingBox(10.0, 10.0, 90.0, 90.0))],
        )
        (a,) = shear_perspective(frame, h).annotations
        assert a.box == BoundingBox(0.0, 10.0, 60.0, 90.0)

    def test_mostly_out_of_frame_boxes_dropped(self):
        # push the box so only a sliver under 10% of its area stays visible
        h = np.array([[1, 0, 95], [0, 1, 0], [0, 0, 1]], dtype=float)
        frame = make_frame(
            width_px=100,
            height_px=100,
            annotations=[make_annotation(box=BoundingBox(0.0, 10.0, 60.0, 40.0))],
        )
        assert shear_perspective(frame, h).annotations == []

    def test_barely_visible_boxes_kept_at_threshold(self):
        # exactly 10% visible: width 60 -> 6 in frame
        h = np.array([[1, 0, 46], [0, 1, 0], [0, 0, 1]], dtype=float)
        frame = make_frame(
            width_px=100,
            height_px=100,
            annotations=[make_annotation(box=BoundingBox(0.0, 10.0, 60.0, 40.0))],
        )
        (a,) = shear_perspective(frame, h).annotations
        assert a.box.x_min == 46.0 and a.box.x_max == 100.0

    def test_fully_outside_box_dropped(self):
        h = np.array([[1, 0, 500], [0, 1, 0], [0, 0, 1]], dtype=float)
        frame = make_frame(
            width_px=100,
            annotations=[make_annotation(box=BoundingBox(0.0, 0.0, 50.0, 50.0))],
        )
        assert shear_perspective(frame, h).annotations == []

    def test_singular_matrix_rejected(self):
        with pytest.raises(ValueError, match="singular"):
            shear_perspective(make_frame(), np.zeros((3, 3)))

    def test_wrong_shape_rejected(self):
        with pytest.raises(ValueError, match="3x3"):
            shear_perspective(make_frame(), np.eye(2))


class TestPhotometric:
    def test_annotations_pass_through_bit_identical(self):
        rng = random.Random(31)
        frame = make_frame(
            annotations=[
                make_annotation(track_id=f"t{i}", box=random_dyadic_box(rng))
                for i in range(20)
            ]
        )
        out = photometric_jitter(frame, brightness=0.2, hue_degrees=30.0, contrast=1.3)
        assert out.annotations == frame.annotations

    def test_parameter_validation(self):
        frame = make_frame()
        with pytest.raises(ValueError, match="brightness"):
            photometric_jitter(frame, brightness=1.5, hue_degrees=0, contrast=1)
        with pytest.raises(ValueError, match="contrast"):
            photometric_jitter(frame, brightness=0, hue_degrees=0, contrast=0)
        with pytest.raises(ValueError, match="hue"):
            photometric_jitter(frame, brightness=0, hue_degrees=float("nan"), contrast=1)

    def test_identity_jitter_is_bit_stable_on_pixels(self):
        rng = np.random.default_rng(8)
        image = rng.integers(0, 256, size=(20, 30, 3), dtype=np.uint8)
        out = jitter_image(image, brightness=0.0, hue_degrees=0.0, contrast=1.0)
        assert np.array_equal(out, image)

    def test_full_turn_hue_is_identity(self):
        rng = np.random.default_rng(9)
        image = rng.integers(0, 256, size=(10, 10, 3), dtype=np.uint8)
        out = jitter_image(image, brightness=0.0, hue_degrees=360.0, contrast=1.0)
        assert np.array_equal(out, image)

    def test_brightness_clamps_at_saturation(self):
        image = np.full((4, 4, 3), 250, dtype=np.uint8)
        brighter = jitter_image(image, brightness=0.5, hue_degrees=0.0, contrast=1.0)
        assert (brighter == 255).all()
        # round trip through saturation loses information
        back = jitter_image(brighter, brightness=-0.5, hue_degrees=0.0, contrast=1.0)
        assert not np.array_equal(back, image)

    def test_contrast_expands_about_midgray(self):
        # the pivot 127.5 is not a uint8 value, so test both sides of it
        dark = np.full((2, 2, 3), 64, dtype=np.uint8)
        assert (jitter_image(dark, 0.0, 0.0, 2.0) < 64).all()
        bright = np.full((2, 2, 3), 192, dtype=np.uint8)
        assert (jitter_image(bright, 0.0, 0.0, 2.0) > 192).all()
        # distances from the pivot scale by the contrast factor
        out = jitter_image(dark, 0.0, 0.0, 2.0)
        assert out[0, 0, 0] == pytest.approx(127.5 - 2 * (127.5 - 64), abs=1.0)


class TestWarpImage:
    def test_identity_warp_keeps_pixels(self):
        rng = np.random.default_rng(12)
        image = rng.integers(0, 256, size=(16, 24, 3), dtype=np.uint8)
        assert np.array_equal(warp_image(image, IDENTITY), image)

    def test_translation_moves_content(self):
        image = np.zeros((10, 10, 3), dtype=np.uint8)
        image[2, 2] = 200
        h = np.array([[1, 0, 3], [0, 1, 0], [0, 0, 1]], dtype=float)
        warped = warp_image(image, h)
        assert (warped[2, 5] == 200).all()

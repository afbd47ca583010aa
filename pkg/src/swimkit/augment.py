"""Dataset augmentation with exact bounding-box propagation.

Frame records reference images by path, so geometry and pixels are handled
separately: the ``*_frame`` functions transform annotations (pure, exact) and
the ``*_image`` helpers transform pixel arrays. The export CLI applies both
and writes a new manifest next to the warped images; the source dataset is
never mutated.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .model import Annotation, BoundingBox, FrameRecord, MIN_VISIBLE_FRACTION


def flip_horizontal(frame: FrameRecord, lane_count: int | None = None) -> FrameRecord:
    """Mirror a frame's annotations across the vertical axis.

    Exact involution: applying it twice gives back the original boxes
    bit-for-bit. Lanes are renumbered right-to-left when ``lane_count`` is
    known; classes, track ids and flags are untouched.
    """
    width = frame.width_px
    flipped = []
    for a in frame.annotations:
        box = BoundingBox(
            x_min=width - a.box.x_max,
            y_min=a.box.y_min,
            x_max=width - a.box.x_min,
            y_max=a.box.y_max,
        )
        lane = lane_count - 1 - a.lane if lane_count is not None else a.lane
        flipped.append(replace(a, box=box, lane=lane))
    return replace(frame, annotations=flipped)


def flip_image(image: np.ndarray) -> np.ndarray:
    return image[:, ::-1].copy()


def _as_homography(matrix) -> np.ndarray:
    h = np.asarray(matrix, dtype=float)
    if h.shape != (3, 3):
        raise ValueError(f"homography must be 3x3, got shape {h.shape}")
    if abs(np.linalg.det(h)) < 1e-12:
        raise ValueError("homography is singular")
    return h


def transform_box(box: BoundingBox, homography: np.ndarray) -> BoundingBox:
    """Axis-aligned hull of the box's four corners under a homography."""
    corners = np.array(
        [
            [box.x_min, box.y_min, 1.0],
            [box.x_max, box.y_min, 1.0],
            [box.x_max, box.y_max, 1.0],
            [box.x_min, box.y_max, 1.0],
        ]
    )
    mapped = corners @ homography.T
    w = mapped[:, 2]
    if np.any(np.abs(w) < 1e-12):
        raise ValueError("homography maps a box corner to infinity")
    xs = mapped[:, 0] / w
    ys = mapped[:, 1] / w
    return BoundingBox(x_min=xs.min(), y_min=ys.min(), x_max=xs.max(), y_max=ys.max())


def shear_perspective(
    frame: FrameRecord,
    homography,
    min_visible: float = MIN_VISIBLE_FRACTION,
) -> FrameRecord:
    """Warp annotations through a 3x3 homography, clipping to the frame.

    Each box becomes the axis-aligned hull of its transformed corners. Boxes
    whose in-frame area falls below ``min_visible`` of the transformed area
    are dropped, mirroring the do-not-annotate rule for mostly-hidden
    swimmers.

    Raises:
        ValueError: for a singular matrix or a corner mapped to infinity.
    """
    h = _as_homography(homography)
    kept = []
    for a in frame.annotations:
        hull = transform_box(a.box, h)
        clipped = BoundingBox(
            x_min=max(hull.x_min, 0.0),
            y_min=max(hull.y_min, 0.0),
            x_max=min(hull.x_max, float(frame.width_px)),
            y_max=min(hull.y_max, float(frame.height_px)),
        )
        if clipped.x_min >= clipped.x_max or clipped.y_min >= clipped.y_max:
            continue
        if clipped.area < min_visible * hull.area:
            continue
        kept.append(replace(a, box=clipped))
    return replace(frame, annotations=kept)


def warp_image(image: np.ndarray, homography) -> np.ndarray:
    import cv2

    h = _as_homography(homography)
    return cv2.warpPerspective(image, h, (image.shape[1], image.shape[0]))


def _check_jitter(brightness: float, hue_degrees: float, contrast: float) -> None:
    if not -1.0 <= brightness <= 1.0:
        raise ValueError(f"brightness must be in [-1, 1], got {brightness}")
    if not contrast > 0:
        raise ValueError(f"contrast must be positive, got {contrast}")
    if not np.isfinite(hue_degrees):
        raise ValueError(f"hue shift must be finite, got {hue_degrees}")


def photometric_jitter(
    frame: FrameRecord, brightness: float, hue_degrees: float, contrast: float
) -> FrameRecord:
    """Photometric changes only touch pixels; annotations pass through untouched.

    Raises:
        ValueError: for parameters outside their ranges.
    """
    _check_jitter(brightness, hue_degrees, contrast)
    return replace(frame, annotations=list(frame.annotations))


def jitter_image(
    image: np.ndarray, brightness: float, hue_degrees: float, contrast: float
) -> np.ndarray:
    """Apply brightness shift, contrast gain about mid-gray, then hue rotation.

    Input and output are uint8 BGR. Values clamp to [0, 255], so a +delta
    followed by -delta is not an identity wherever clamping saturated a pixel.
    """
    import cv2

    _check_jitter(brightness, hue_degrees, contrast)
    scaled = image.astype(np.float32) / 255.0
    scaled = (scaled + brightness - 0.5) * contrast + 0.5
    scaled = np.clip(scaled, 0.0, 1.0)
    out = (scaled * 255.0).round().astype(np.uint8)
    if hue_degrees % 360 != 0:
        hsv = cv2.cvtColor(out, cv2.COLOR_BGR2HSV)
        # OpenCV hue lives in [0, 180)
        shift = int(round(hue_degrees / 2.0))
        hsv[..., 0] = (hsv[..., 0].astype(int) + shift) % 180
        out = cv2.cvtColor(hsv.astype(np.uint8), cv2.COLOR_HSV2BGR)
    return out

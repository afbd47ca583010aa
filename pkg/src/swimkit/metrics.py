"""Detection evaluation: IoU, greedy matching, per-class AP and mAP.

Average precision follows the all-point-interpolation convention: sort
detections by descending confidence, walk the cumulative precision/recall
curve, replace precision with its running maximum from the right (the
"envelope"), and integrate over recall. An evaluator can be switched to the
older 11-point interpolation for comparison against tooling that uses it.

"Tracking" AP relabels every box (ground truth and detection) to a single
class before evaluating, measuring pure localization quality: how well
swimmers are found regardless of which race phase they are in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import BoundingBox, FrameRecord, SwimmerClass

TRACKING = "tracking"


@dataclass(frozen=True)
class DetectionRecord:
    """One detector output row: a scored box for a frame."""

    frame_id: str
    swimmer_class: SwimmerClass
    confidence: float
    box: BoundingBox


@dataclass(frozen=True)
class ClassCounts:
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class EvalReport:
    """Per-class AP over classes with ground truth, their mean, and tracking AP."""

    per_class_ap: dict[SwimmerClass, float]
    mean_ap: float
    tracking_ap: float
    counts: dict[SwimmerClass, ClassCounts]
    tracking_counts: ClassCounts
    iou_threshold: float


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes; 0 when disjoint."""
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ix <= 0 or iy <= 0:
        return 0.0
    intersection = ix * iy
    union = a.area + b.area - intersection
    return intersection / union


@dataclass
class _ClassEval:
    """Accumulates match outcomes for one class."""

    num_gt: int = 0
    # one flag per detection, in confidence order: True = TP
    hits: list[bool] = field(default_factory=list)

    @property
    def tp(self) -> int:
        return sum(self.hits)

    @property
    def fp(self) -> int:
        return len(self.hits) - self.tp


def _match_class(
    detections: list[tuple[int, DetectionRecord]],
    gt_boxes: dict[str, list[BoundingBox]],
    iou_threshold: float,
) -> _ClassEval:
    """Greedy confidence-ordered matching for a single class.

    Each detection claims the unmatched ground-truth box in its frame with the
    highest IoU at or above the threshold; later (lower-confidence) detections
    cannot steal it, so duplicates on one box become false positives.
    """
    result = _ClassEval(num_gt=sum(len(boxes) for boxes in gt_boxes.values()))
    detections = sorted(
        detections, key=lambda item: (-item[1].confidence, item[1].frame_id, item[0])
    )
    taken: dict[str, set[int]] = {fid: set() for fid in gt_boxes}
    for _, det in detections:
        candidates = gt_boxes.get(det.frame_id, [])
        best_iou, best_idx = 0.0, None
        for gi, gt_box in enumerate(candidates):
            if gi in taken[det.frame_id]:
                continue
            overlap = iou(det.box, gt_box)
            if overlap >= iou_threshold and overlap > best_iou:
                best_iou, best_idx = overlap, gi
        if best_idx is not None:
            taken[det.frame_id].add(best_idx)
            result.hits.append(True)
        else:
            result.hits.append(False)
    return result


def average_precision(hits: list[bool], num_gt: int, *, eleven_point: bool = False) -> float:
    """AP from per-detection hit flags (already in descending-confidence order).

    Returns 0 when there is no ground truth or no detections.
    """
    if num_gt == 0 or not hits:
        return 0.0
    tp = np.cumsum(hits)
    fp = np.cumsum(np.logical_not(hits))
    recall = tp / num_gt
    precision = tp / (tp + fp)

    if eleven_point:
        levels = np.linspace(0.0, 1.0, 11)
        total = 0.0
        for level in levels:
            above = precision[recall >= level]
            total += above.max() if above.size else 0.0
        return float(total / 11.0)

    mrec = np.concatenate(([0.0], recall, [1.0]))
    mpre = np.concatenate(([0.0], precision, [0.0]))
    for i in range(mpre.size - 2, -1, -1):
        mpre[i] = max(mpre[i], mpre[i + 1])
    steps = np.nonzero(mrec[1:] != mrec[:-1])[0] + 1
    return float(np.sum((mrec[steps] - mrec[steps - 1]) * mpre[steps]))


def evaluate(
    groundtruth: list[FrameRecord],
    detections: list[DetectionRecord],
    iou_threshold: float = 0.5,
    *,
    eleven_point: bool = False,
) -> EvalReport:
    """Score detections against annotated frames.

    Per-class AP is computed for every class with at least one ground-truth
    box; their mean is the mAP. Tracking AP repeats the evaluation with all
    classes merged into one.

    Raises:
        ValueError: for a threshold outside (0, 1) or a detection referencing
            an unknown frame id.
    """
    if not 0 < iou_threshold < 1:
        raise ValueError(f"iou_threshold must be in (0, 1), got {iou_threshold}")
    known = {f.frame_id for f in groundtruth}
    for det in detections:
        if det.frame_id not in known:
            raise ValueError(f"detection references unknown frame_id {det.frame_id!r}")

    per_class_ap: dict[SwimmerClass, float] = {}
    counts: dict[SwimmerClass, ClassCounts] = {}
    for cls in SwimmerClass:
        gt_boxes = {
            f.frame_id: [a.box for a in f.annotations if a.swimmer_class is cls]
            for f in groundtruth
        }
        dets = [(i, d) for i, d in enumerate(detections) if d.swimmer_class is cls]
        result = _match_class(dets, gt_boxes, iou_threshold)
        counts[cls] = ClassCounts(
            tp=result.tp, fp=result.fp, fn=result.num_gt - result.tp
        )
        if result.num_gt > 0:
            per_class_ap[cls] = average_precision(
                result.hits, result.num_gt, eleven_point=eleven_point
            )

    # class-agnostic pass: every box belongs to the one "tracking" class
    gt_all = {f.frame_id: [a.box for a in f.annotations] for f in groundtruth}
    tracking = _match_class(list(enumerate(detections)), gt_all, iou_threshold)
    tracking_ap = average_precision(
        tracking.hits, tracking.num_gt, eleven_point=eleven_point
    )

    mean_ap = (
        sum(per_class_ap.values()) / len(per_class_ap) if per_class_ap else 0.0
    )
    return EvalReport(
        per_class_ap=per_class_ap,
        mean_ap=mean_ap,
        tracking_ap=tracking_ap,
        counts=counts,
        tracking_counts=ClassCounts(
            tp=tracking.tp, fp=tracking.fp, fn=tracking.num_gt - tracking.tp
        ),
        iou_threshold=iou_threshold,
    )

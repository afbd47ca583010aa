"""Command-line entry points: one subcommand per workflow step."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import augment as aug
from .config import Config, data_root
from .coverage import coverage_report, render_report, report_to_csv_rows
from .metrics import evaluate
from .model import SwimmerClass
from .sampling import SamplingPolicy, SubsetMethod, SubsetSpec, make_subset, select_frames
from .stats import dataset_stats, estimate_workload
from .storage import (
    export_darknet,
    export_voc_xml,
    load_detections,
    load_manifest,
    save_manifest,
)
from .sweep import discover_runs, run_sweep, write_sweep_csv, write_sweep_long_csv


def _add_manifest_arg(parser):
    parser.add_argument("--manifest", required=True, help="path to a dataset manifest")


def cmd_serve(args) -> int:
    import uvicorn

    from .service import AnnotationStore, create_app

    manifest = load_manifest(args.manifest)
    store = AnnotationStore(manifest, Config.load(args.config))
    app = create_app(store, manifest_path=args.manifest, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_sample(args) -> int:
    manifest = load_manifest(args.manifest)
    config = Config.load(args.config)
    policy = SamplingPolicy(
        base_stride=args.stride or config.base_stride,
        dive_stride=args.dive_stride or config.dive_stride,
    )
    keep = set()
    for video_id, meta in manifest.videos.items():
        frames = manifest.frames_of(video_id)
        indices = select_frames(
            [f.frame_index for f in frames], policy, list(meta.dive_ranges)
        )
        chosen = set(indices)
        keep.update(f.frame_id for f in frames if f.frame_index in chosen)
    sampled = replace(manifest, frames=[f for f in manifest.frames if f.frame_id in keep])
    save_manifest(sampled, args.out)
    print(f"kept {len(sampled.frames)}/{len(manifest.frames)} frames -> {args.out}")
    return 0


def cmd_subset(args) -> int:
    manifest = load_manifest(args.manifest)
    spec = SubsetSpec(
        method=SubsetMethod(args.method), fraction=args.fraction, seed=args.seed
    )
    chosen = set(make_subset(manifest.frames, spec))
    subset = replace(manifest, frames=[f for f in manifest.frames if f.frame_id in chosen])
    save_manifest(subset, args.out)
    print(f"selected {len(subset.frames)}/{len(manifest.frames)} frames -> {args.out}")
    return 0


def cmd_augment(args) -> int:
    import cv2

    manifest = load_manifest(args.manifest)
    out_dir = Path(args.out_dir)
    images_dir = out_dir / "images"
    images_dir.mkdir(parents=True, exist_ok=True)
    homography = None
    if args.shear:
        values = [float(v) for v in args.shear.split(",")]
        if len(values) != 9:
            print("--shear needs 9 comma-separated values (row-major 3x3)", file=sys.stderr)
            return 2
        homography = np.array(values).reshape(3, 3)

    frames = []
    for frame in manifest.frames:
        meta = manifest.videos[frame.video_id]
        out = frame
        if args.flip:
            out = aug.flip_horizontal(out, lane_count=meta.lane_count)
        if homography is not None:
            out = aug.shear_perspective(out, homography)
        if args.brightness or args.hue or args.contrast != 1.0:
            out = aug.photometric_jitter(out, args.brightness, args.hue, args.contrast)

        src = data_root() / frame.image_path
        new_path = f"images/{frame.frame_id}.png"
        if src.exists():
            image = cv2.imread(str(src))
            if args.flip:
                image = aug.flip_image(image)
            if homography is not None:
                image = aug.warp_image(image, homography)
            if args.brightness or args.hue or args.contrast != 1.0:
                image = aug.jitter_image(image, args.brightness, args.hue, args.contrast)
            cv2.imwrite(str(out_dir / new_path), image)
            out = replace(out, image_path=new_path)
        frames.append(out)

    augmented = replace(manifest, dataset_id=f"{manifest.dataset_id}-aug", frames=frames)
    save_manifest(augmented, out_dir / "manifest.json")
    print(f"wrote {len(frames)} augmented frames -> {out_dir / 'manifest.json'}")
    return 0


def cmd_eval(args) -> int:
    manifest = load_manifest(args.gt)
    detections = load_detections(args.det)
    report = evaluate(manifest.frames, detections, args.iou)
    print(f"IoU threshold: {report.iou_threshold}")
    for cls in SwimmerClass:
        counts = report.counts[cls]
        ap = report.per_class_ap.get(cls)
        ap_text = f"{ap:.4f}" if ap is not None else "   n/a"
        print(
            f"{cls.value:>12}: AP {ap_text}  TP {counts.tp:5d}  FP {counts.fp:5d}  FN {counts.fn:5d}"
        )
    print(f"{'mAP':>12}: {report.mean_ap:.4f}")
    print(f"{'tracking':>12}: AP {report.tracking_ap:.4f}")
    return 0


def cmd_sweep(args) -> int:
    manifest = load_manifest(args.gt)
    fractions = [float(f) for f in args.fractions.split(",")]
    methods = [SubsetMethod(m) for m in args.methods.split(",")]
    pools = args.pools.split(",")
    runs = discover_runs(args.runs, fractions, methods, pools)
    rows = run_sweep(manifest, runs, args.iou)
    write_sweep_csv(rows, args.out)
    print(f"wrote {len(rows)} sweep rows -> {args.out}")
    if args.long_out:
        write_sweep_long_csv(rows, args.long_out)
        print(f"wrote long-format curves -> {args.long_out}")
    return 0


def cmd_coverage(args) -> int:
    paths = sorted(Path(args.manifests).glob("*.json"))
    if not paths:
        print(f"no manifests found under {args.manifests}", file=sys.stderr)
        return 2
    manifests = [load_manifest(p) for p in paths]
    report = coverage_report(manifests)
    text = render_report(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote report -> {args.out}")
    else:
        print(text, end="")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh).writerows(report_to_csv_rows(report))
        print(f"wrote csv -> {args.csv}")
    return 0


def cmd_export(args) -> int:
    manifest = load_manifest(args.manifest)
    if args.format == "darknet":
        order = None
        if args.class_order:
            order = [SwimmerClass(name) for name in args.class_order.split(",")]
        export_darknet(manifest, args.out, order)
    else:
        export_voc_xml(manifest, args.out)
    print(f"exported {len(manifest.frames)} frames as {args.format} -> {args.out}")
    return 0


def cmd_stats(args) -> int:
    manifest = load_manifest(args.manifest)
    stats = dataset_stats(manifest.frames)
    print(f"{'class':>12}  {'count':>8}  {'fraction':>9}  {'percent':>7}")
    for cls in SwimmerClass:
        s = stats.per_class[cls]
        print(
            f"{cls.value:>12}  {s.count:8d}  {s.exact_fraction:9.4f}  {s.rounded_percent:6d}%"
        )
    print(f"{'total':>12}  {stats.total:8d}")
    return 0


def cmd_estimate(args) -> int:
    estimate = estimate_workload(
        args.duration, args.fps, args.swimmers, args.seconds_per_box
    )
    print(
        f"boxes: {estimate.boxes}  total: {estimate.total_seconds:.0f} s "
        f"({estimate.total_days:.2f} days of continuous work)"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swimkit",
        description="Build, sample, augment and evaluate swim-race detection datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the annotation service")
    _add_manifest_arg(p)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--config", default=None)
    p.add_argument("--ui-dir", default=None, help="static frontend directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("sample", help="keep only stride-sampled frames")
    _add_manifest_arg(p)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--dive-stride", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("subset", help="write a fractional subset manifest")
    _add_manifest_arg(p)
    p.add_argument("--method", choices=[m.value for m in SubsetMethod], required=True)
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_subset)

    p = sub.add_parser("augment", help="write an augmented copy of a dataset")
    _add_manifest_arg(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--flip", action="store_true")
    p.add_argument("--shear", default=None, help="9 comma-separated homography values")
    p.add_argument("--brightness", type=float, default=0.0)
    p.add_argument("--hue", type=float, default=0.0)
    p.add_argument("--contrast", type=float, default=1.0)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("eval", help="score a detection file against ground truth")
    p.add_argument("--gt", required=True)
    p.add_argument("--det", required=True)
    p.add_argument("--iou", type=float, default=0.5)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate detector runs across data fractions")
    p.add_argument("--runs", required=True, help="directory of detection run files")
    p.add_argument("--gt", required=True)
    p.add_argument(
        "--fractions", default="0.01,0.02,0.05,0.1,0.25,0.5,0.75,1.0"
    )
    p.add_argument("--methods", default="random,stratified")
    p.add_argument("--pools", required=True, help="comma-separated test pool names")
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("--long-out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("coverage", help="report variance coverage and gaps")
    p.add_argument("--manifests", required=True, help="directory of manifest files")
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("export", help="export labels for external training")
    _add_manifest_arg(p)
    p.add_argument("--format", choices=["darknet", "voc"], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--class-order", default=None, help="comma-separated class names")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stats", help="per-class annotation counts")
    _add_manifest_arg(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("estimate", help="annotation workload arithmetic")
    p.add_argument("--duration", type=float, required=True, help="video seconds")
    p.add_argument("--fps", type=float, required=True)
    p.add_argument("--swimmers", type=int, required=True)
    p.add_argument("--seconds-per-box", type=float, default=2.0)
    p.set_defaults(func=cmd_estimate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

/** Wire types for the annotation service API, plus UI-wide constants. */

export type SwimmerClass =
  | "on_blocks"
  | "diving"
  | "underwater"
  | "swimming"
  | "turning"
  | "finishing";

/** Hotkeys 1..6 follow the order the classes occur in a race. */
export const CLASS_ORDER: SwimmerClass[] = [
  "on_blocks",
  "diving",
  "underwater",
  "swimming",
  "turning",
  "finishing",
];

export const CLASS_LABELS: Record<SwimmerClass, string> = {
  on_blocks: "On blocks",
  diving: "Diving",
  underwater: "Underwater",
  swimming: "Swimming",
  turning: "Turning",
  finishing: "Finishing",
};

/** Fixed box palette, one color per class (see README for the guide). */
export const CLASS_COLORS: Record<SwimmerClass, string> = {
  on_blocks: "#9467bd",
  diving: "#ff7f0e",
  underwater: "#17becf",
  swimming: "#2ca02c",
  turning: "#d62728",
  finishing: "#1f77b4",
};

/** Boxes are [x_min, y_min, x_max, y_max] in frame pixels on the wire. */
export interface AnnotationPayload {
  box: [number, number, number, number];
  swimmer_class: SwimmerClass;
  lane: number;
  track_id: string;
  visible_fraction: number;
  truncated_by_camera: boolean;
}

export interface FramePayload {
  frame_id: string;
  video_id: string;
  frame_index: number;
  timestamp_s: number;
  image_path: string;
  width_px: number;
  height_px: number;
  version: number;
  annotations: AnnotationPayload[];
}

export interface VideoInfo {
  video_id: string;
  venue_name: string;
  stroke: string;
  race_distance_m: number;
  fps: number;
  lane_count: number;
  dive_ranges: [number, number][];
  race_start_frame_index: number | null;
  frame_count: number;
  frame_ids: string[];
}

export interface Violation {
  code: string;
  message: string;
  track_id?: string;
  frame_indices?: [number, number];
  classes?: [SwimmerClass, SwimmerClass];
}

export type SaveResult =
  | { ok: true; version: number }
  | { ok: false; kind: "conflict"; currentVersion: number }
  | { ok: false; kind: "invalid"; violations: Violation[] };

export interface Progress {
  boxes_done: number;
  boxes_estimated: number;
  session_elapsed_s: number;
  session_seconds_per_box: number | null;
  class_counts: Record<SwimmerClass, number>;
  class_percents: Record<SwimmerClass, number>;
}

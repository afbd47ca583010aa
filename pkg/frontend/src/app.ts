import type { AnnotationApi } from "./client.js";
import { paintFrame } from "./draw.js";
import {
  clampBox,
  eventToFrame,
  normalizeRect,
  tooSmall,
  type Box,
  type DragRect,
} from "./geometry.js";
import {
  CLASS_LABELS,
  CLASS_ORDER,
  type AnnotationPayload,
  type FramePayload,
  type SwimmerClass,
  type VideoInfo,
  type Violation,
} from "./types.js";

export const NEW_TRACK_OPTION = "__new__";

export interface AppState {
  video: VideoInfo | null;
  frame: FramePayload | null;
  /** Local working copy of the frame's annotations, saved as a whole. */
  working: AnnotationPayload[];
  selectedTrack: string | null;
  /** Classes the service allows for the selected track at this frame. */
  legal: SwimmerClass[];
  pendingClass: SwimmerClass | null;
  pendingVisible: number;
  drag: DragRect | null;
  violations: Violation[];
  conflictVersion: number | null;
  notice: string;
  saving: boolean;
}

export interface AppElements {
  canvas: HTMLCanvasElement;
  frameSelect: HTMLSelectElement;
  nextButton: HTMLButtonElement;
  trackSelect: HTMLSelectElement;
  newTrackInput: HTMLInputElement;
  addTrackButton: HTMLButtonElement;
  classButtons: Map<SwimmerClass, HTMLButtonElement>;
  laneInput: HTMLInputElement;
  vis100: HTMLButtonElement;
  vis50: HTMLButtonElement;
  visLow: HTMLButtonElement;
  saveButton: HTMLButtonElement;
  conflictBanner: HTMLElement;
  reloadButton: HTMLButtonElement;
  violationsList: HTMLUListElement;
  noticeLine: HTMLElement;
  progressPane: HTMLElement;
  refreshProgressButton: HTMLButtonElement;
}

export interface App {
  state: AppState;
  elements: AppElements;
  start(): Promise<void>;
  loadFrame(frameId: string): Promise<void>;
  selectTrack(trackId: string): Promise<void>;
  save(): Promise<void>;
  nextFrame(): Promise<void>;
  refreshProgress(): Promise<void>;
  render(): void;
  destroy(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text = ""
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) node.textContent = text;
  return node;
}

export function createApp(root: HTMLElement, client: AnnotationApi): App {
  const doc = root.ownerDocument;

  const state: AppState = {
    video: null,
    frame: null,
    working: [],
    selectedTrack: null,
    legal: [],
    pendingClass: null,
    pendingVisible: 1.0,
    drag: null,
    violations: [],
    conflictVersion: null,
    notice: "",
    saving: false,
  };

  root.textContent = "";

  const canvas = el(doc, "canvas", { id: "frame-canvas" });
  canvas.style.maxWidth = "100%";
  canvas.style.cursor = "crosshair";

  const frameSelect = el(doc, "select", { id: "frame-select" });
  const nextButton = el(doc, "button", { id: "next-frame" }, "next frame (n)");

  const trackSelect = el(doc, "select", { id: "track-select" });
  const newTrackInput = el(doc, "input", {
    id: "new-track",
    placeholder: "new track id",
  });
  const addTrackButton = el(doc, "button", { id: "track-add" }, "add track");

  const classPicker = el(doc, "div", { id: "class-picker" });
  const classButtons = new Map<SwimmerClass, HTMLButtonElement>();
  CLASS_ORDER.forEach((cls, i) => {
    const button = el(
      doc,
      "button",
      { "data-class": cls, id: `class-${cls}` },
      `${i + 1} ${CLASS_LABELS[cls]}`
    );
    classButtons.set(cls, button);
    classPicker.appendChild(button);
  });

  const laneInput = el(doc, "input", { id: "lane", type: "number", value: "0" });
  const vis100 = el(doc, "button", { id: "vis-100" }, "visible 100%");
  const vis50 = el(doc, "button", { id: "vis-50" }, "visible 50%");
  const visLow = el(doc, "button", { id: "vis-low" }, "visible <10%");

  const saveButton = el(doc, "button", { id: "save" }, "save (s)");

  const conflictBanner = el(doc, "div", { id: "conflict-banner", hidden: "" });
  const conflictText = el(doc, "span", { id: "conflict-text" });
  const reloadButton = el(doc, "button", { id: "reload" }, "reload frame");
  conflictBanner.append(conflictText, reloadButton);

  const violationsList = el(doc, "ul", { id: "violations" });
  const noticeLine = el(doc, "div", { id: "notice" });
  const progressPane = el(doc, "div", { id: "progress" });
  const refreshProgressButton = el(
    doc,
    "button",
    { id: "refresh-progress" },
    "refresh progress"
  );

  const sidebar = el(doc, "div", { id: "sidebar" });
  sidebar.append(
    frameSelect,
    nextButton,
    trackSelect,
    newTrackInput,
    addTrackButton,
    classPicker,
    laneInput,
    vis100,
    vis50,
    visLow,
    saveButton,
    conflictBanner,
    violationsList,
    noticeLine,
    refreshProgressButton,
    progressPane
  );
  root.append(canvas, sidebar);

  let image: HTMLImageElement | null = null;

  function beforeRaceStart(): boolean {
    return (
      state.video?.race_start_frame_index != null &&
      state.frame != null &&
      state.frame.frame_index < state.video.race_start_frame_index
    );
  }

  function disabledReason(cls: SwimmerClass): string {
    if (state.legal.length === 1 && state.legal[0] === "finishing") {
      return "finishing is always the last class of a track";
    }
    if (state.legal.length === 1 && state.legal[0] === "on_blocks" && beforeRaceStart()) {
      return "before the race start every swimmer is still on the blocks";
    }
    return `no legal transition into ${CLASS_LABELS[cls].toLowerCase()} for this track here`;
  }

  function workingFor(trackId: string): AnnotationPayload | undefined {
    return state.working.find((a) => a.track_id === trackId);
  }

  function laneValue(): number {
    const parsed = parseInt(laneInput.value, 10);
    return Number.isFinite(parsed) ? parsed : 0;
  }

  function render(): void {
    paintFrame(canvas, image, state.working, state.selectedTrack, state.drag, state.violations);

    for (const [cls, button] of classButtons) {
      const allowed = state.legal.includes(cls);
      button.disabled = !allowed;
      button.title = allowed ? `assign ${CLASS_LABELS[cls]}` : disabledReason(cls);
      button.setAttribute("aria-pressed", String(cls === state.pendingClass));
    }

    // track dropdown mirrors the working set plus the "new track" entry
    const current = state.selectedTrack;
    trackSelect.textContent = "";
    const trackIds = [...new Set(state.working.map((a) => a.track_id))].sort();
    if (current !== null && !trackIds.includes(current)) trackIds.push(current);
    for (const trackId of trackIds.sort()) {
      trackSelect.appendChild(el(doc, "option", { value: trackId }, trackId));
    }
    trackSelect.appendChild(el(doc, "option", { value: NEW_TRACK_OPTION }, "new track…"));
    trackSelect.value = current ?? NEW_TRACK_OPTION;

    if (state.conflictVersion === null) {
      conflictBanner.setAttribute("hidden", "");
    } else {
      conflictBanner.removeAttribute("hidden");
      conflictText.textContent =
        `This frame was saved elsewhere (now at version ${state.conflictVersion}). ` +
        "Reload to pick up the latest annotations; unsaved edits here are discarded.";
    }

    violationsList.textContent = "";
    for (const violation of state.violations) {
      const item = el(doc, "li", {}, violation.message);
      if (violation.track_id) item.setAttribute("data-track", violation.track_id);
      violationsList.appendChild(item);
    }

    noticeLine.textContent = state.notice;
    saveButton.disabled = state.saving;
  }

  async function refreshLegal(): Promise<void> {
    if (!state.video || !state.frame || state.selectedTrack === null) {
      state.legal = [];
      state.pendingClass = null;
      render();
      return;
    }
    state.legal = await client.legalNext(
      state.video.video_id,
      state.selectedTrack,
      state.frame.frame_index
    );
    if (state.pendingClass === null || !state.legal.includes(state.pendingClass)) {
      state.pendingClass = CLASS_ORDER.find((cls) => state.legal.includes(cls)) ?? null;
    }
    render();
  }

  async function selectTrack(trackId: string): Promise<void> {
    state.selectedTrack = trackId;
    const existing = workingFor(trackId);
    if (existing) {
      state.pendingClass = existing.swimmer_class;
      state.pendingVisible = existing.visible_fraction;
      laneInput.value = String(existing.lane);
    }
    await refreshLegal();
  }

  async function loadFrame(frameId: string): Promise<void> {
    const frame = await client.getFrame(frameId);
    state.frame = frame;
    state.working = frame.annotations.map((a) => ({ ...a, box: [...a.box] as AnnotationPayload["box"] }));
    state.violations = [];
    state.conflictVersion = null;
    state.drag = null;
    state.notice = "";
    canvas.width = frame.width_px;
    canvas.height = frame.height_px;

    image = doc.createElement("img");
    image.onload = () => render();
    image.src = client.imageUrl(frameId);

    frameSelect.value = frameId;
    const first = state.working[0];
    if (first) {
      await selectTrack(first.track_id);
    } else {
      state.selectedTrack = null;
      state.legal = [];
      state.pendingClass = null;
      render();
    }
  }

  function commitDrag(): void {
    if (!state.drag || !state.frame) return;
    const raw = normalizeRect(state.drag);
    state.drag = null;
    if (tooSmall(raw)) {
      render();
      return;
    }
    if (state.selectedTrack === null) {
      state.notice = "pick a track before drawing";
      render();
      return;
    }
    if (state.pendingClass === null) {
      state.notice = "no class is legal for this track here";
      render();
      return;
    }
    const { box, clamped } = clampBox(raw, state.frame.width_px, state.frame.height_px);
    upsertWorking(box, clamped);
    state.notice = clamped ? "box clamped to frame; marked truncated by camera" : "";
    render();
  }

  function upsertWorking(box: Box, clamped: boolean): void {
    if (state.selectedTrack === null || state.pendingClass === null) return;
    const annotation: AnnotationPayload = {
      box: [box.xMin, box.yMin, box.xMax, box.yMax],
      swimmer_class: state.pendingClass,
      lane: laneValue(),
      track_id: state.selectedTrack,
      visible_fraction: state.pendingVisible,
      truncated_by_camera: clamped,
    };
    const index = state.working.findIndex((a) => a.track_id === state.selectedTrack);
    if (index >= 0) {
      state.working[index] = annotation;
    } else {
      state.working.push(annotation);
    }
  }

  function setPendingClass(cls: SwimmerClass): void {
    if (!state.legal.includes(cls)) return;
    state.pendingClass = cls;
    const existing = state.selectedTrack === null ? undefined : workingFor(state.selectedTrack);
    if (existing) existing.swimmer_class = cls;
    render();
  }

  function setVisible(fraction: number): void {
    state.pendingVisible = fraction;
    const existing = state.selectedTrack === null ? undefined : workingFor(state.selectedTrack);
    if (existing) existing.visible_fraction = fraction;
    state.notice = "";
    render();
  }

  function dropMostlyHidden(): void {
    // under the visibility floor the swimmer gets no box at all
    if (state.selectedTrack !== null) {
      state.working = state.working.filter((a) => a.track_id !== state.selectedTrack);
    }
    state.pendingVisible = 1.0;
    state.notice = "mostly hidden swimmers get no box; annotation removed";
    render();
  }

  async function save(): Promise<void> {
    if (!state.frame || state.saving) return;
    state.saving = true;
    render();
    try {
      const result = await client.putAnnotations(
        state.frame.frame_id,
        state.frame.version,
        state.working
      );
      if (result.ok) {
        state.frame.version = result.version;
        state.violations = [];
        state.conflictVersion = null;
        state.notice = `saved (version ${result.version})`;
      } else if (result.kind === "conflict") {
        state.conflictVersion = result.currentVersion;
        state.notice = "";
      } else {
        state.violations = result.violations;
        state.notice = "";
      }
    } finally {
      state.saving = false;
    }
    render();
  }

  async function nextFrame(): Promise<void> {
    if (!state.video || !state.frame) return;
    const next = await client.nextFrame(state.video.video_id, state.frame.frame_index);
    if (next === null) {
      state.notice = "no more sampled frames in this video";
      render();
      return;
    }
    await loadFrame(next.frame_id);
  }

  async function refreshProgress(): Promise<void> {
    const progress = await client.progress();
    progressPane.textContent = "";
    const done = el(
      doc,
      "div",
      { id: "progress-boxes" },
      `${progress.boxes_done} of ~${progress.boxes_estimated} boxes`
    );
    const pace =
      progress.session_seconds_per_box === null
        ? "no boxes written this session yet"
        : `${progress.session_seconds_per_box} s/box this session`;
    const paceLine = el(doc, "div", { id: "progress-pace" }, pace);
    const table = el(doc, "table", { id: "progress-classes" });
    for (const cls of CLASS_ORDER) {
      const row = el(doc, "tr", { "data-class": cls });
      row.appendChild(el(doc, "td", {}, CLASS_LABELS[cls]));
      row.appendChild(el(doc, "td", {}, String(progress.class_counts[cls] ?? 0)));
      row.appendChild(el(doc, "td", {}, `${progress.class_percents[cls] ?? 0}%`));
      table.appendChild(row);
    }
    progressPane.append(done, paceLine, table);
  }

  async function start(): Promise<void> {
    const videos = await client.listVideos();
    const video = videos[0];
    if (!video) throw new Error("the service has no videos");
    state.video = video;
    frameSelect.textContent = "";
    for (const frameId of video.frame_ids) {
      frameSelect.appendChild(el(doc, "option", { value: frameId }, frameId));
    }
    const first = await client.nextFrame(video.video_id, null);
    await loadFrame(first ? first.frame_id : video.frame_ids[0]!);
    await refreshProgress();
  }

  // --- event wiring ---------------------------------------------------------

  const onMouseDown = (event: MouseEvent) => {
    if (event.button !== 0 || !state.frame) return;
    const { x, y } = eventToFrame(canvas, event.clientX, event.clientY);
    state.drag = { x0: x, y0: y, x1: x, y1: y };
    render();
  };
  const onMouseMove = (event: MouseEvent) => {
    if (!state.drag) return;
    const { x, y } = eventToFrame(canvas, event.clientX, event.clientY);
    state.drag.x1 = x;
    state.drag.y1 = y;
    render();
  };
  const onMouseUp = (event: MouseEvent) => {
    if (!state.drag) return;
    const { x, y } = eventToFrame(canvas, event.clientX, event.clientY);
    state.drag.x1 = x;
    state.drag.y1 = y;
    commitDrag();
  };

  const onKeyDown = (event: KeyboardEvent) => {
    const target = event.target as HTMLElement | null;
    if (target && ["INPUT", "SELECT", "TEXTAREA"].includes(target.tagName)) return;
    const hotkeyIndex = "123456".indexOf(event.key);
    if (hotkeyIndex >= 0) {
      const cls = CLASS_ORDER[hotkeyIndex]!;
      if (state.legal.includes(cls)) setPendingClass(cls);
    } else if (event.key === "n") {
      void nextFrame();
    } else if (event.key === "s") {
      void save();
    }
  };

  canvas.addEventListener("mousedown", onMouseDown);
  doc.addEventListener("mousemove", onMouseMove);
  doc.addEventListener("mouseup", onMouseUp);
  doc.addEventListener("keydown", onKeyDown);

  for (const [cls, button] of classButtons) {
    button.addEventListener("click", () => setPendingClass(cls));
  }
  vis100.addEventListener("click", () => setVisible(1.0));
  vis50.addEventListener("click", () => setVisible(0.5));
  visLow.addEventListener("click", () => dropMostlyHidden());
  saveButton.addEventListener("click", () => void save());
  nextButton.addEventListener("click", () => void nextFrame());
  reloadButton.addEventListener("click", () => {
    if (state.frame) void loadFrame(state.frame.frame_id);
  });
  refreshProgressButton.addEventListener("click", () => void refreshProgress());
  frameSelect.addEventListener("change", () => void loadFrame(frameSelect.value));
  trackSelect.addEventListener("change", () => {
    if (trackSelect.value !== NEW_TRACK_OPTION) void selectTrack(trackSelect.value);
  });
  addTrackButton.addEventListener("click", () => {
    const trackId = newTrackInput.value.trim();
    if (!trackId) {
      state.notice = "enter a track id first";
      render();
      return;
    }
    void selectTrack(trackId);
  });

  function destroy(): void {
    doc.removeEventListener("mousemove", onMouseMove);
    doc.removeEventListener("mouseup", onMouseUp);
    doc.removeEventListener("keydown", onKeyDown);
  }

  const elements: AppElements = {
    canvas,
    frameSelect,
    nextButton,
    trackSelect,
    newTrackInput,
    addTrackButton,
    classButtons,
    laneInput,
    vis100,
    vis50,
    visLow,
    saveButton,
    conflictBanner,
    reloadButton,
    violationsList,
    noticeLine,
    progressPane,
    refreshProgressButton,
  };

  return {
    state,
    elements,
    start,
    loadFrame,
    selectTrack,
    save,
    nextFrame,
    refreshProgress,
    render,
    destroy,
  };
}

/** Box math for drag-to-draw: normalization, clamping, coordinate mapping. */

export interface Box {
  xMin: number;
  yMin: number;
  xMax: number;
  yMax: number;
}

/** A drag in progress, in frame pixels; corners may be in any order. */
export interface DragRect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function normalizeRect(drag: DragRect): Box {
  return {
    xMin: Math.min(drag.x0, drag.x1),
    yMin: Math.min(drag.y0, drag.y1),
    xMax: Math.max(drag.x0, drag.x1),
    yMax: Math.max(drag.y0, drag.y1),
  };
}

/** Drags shorter than this on either side are treated as stray clicks. */
export const MIN_DRAG_PX = 3;

export function tooSmall(box: Box): boolean {
  return box.xMax - box.xMin < MIN_DRAG_PX || box.yMax - box.yMin < MIN_DRAG_PX;
}

/**
 * Clamp a box to the frame. `clamped` reports whether any edge moved, which
 * is exactly when the swimmer is cut off by the camera and the annotation
 * must carry `truncated_by_camera`.
 */
export function clampBox(
  box: Box,
  widthPx: number,
  heightPx: number
): { box: Box; clamped: boolean } {
  const out = {
    xMin: Math.min(Math.max(box.xMin, 0), widthPx),
    yMin: Math.min(Math.max(box.yMin, 0), heightPx),
    xMax: Math.min(Math.max(box.xMax, 0), widthPx),
    yMax: Math.min(Math.max(box.yMax, 0), heightPx),
  };
  const clamped =
    out.xMin !== box.xMin ||
    out.yMin !== box.yMin ||
    out.xMax !== box.xMax ||
    out.yMax !== box.yMax;
  return { box: out, clamped };
}

/**
 * Map a mouse event position to frame pixels. The canvas is styled to fit
 * the page, so client coordinates scale by canvas.width / rect.width; a
 * zero-size rect (detached canvas, headless DOM) falls back to identity.
 */
export function eventToFrame(
  canvas: HTMLCanvasElement,
  clientX: number,
  clientY: number
): { x: number; y: number } {
  const rect = canvas.getBoundingClientRect();
  const scaleX = rect.width > 0 ? canvas.width / rect.width : 1;
  const scaleY = rect.height > 0 ? canvas.height / rect.height : 1;
  return {
    x: (clientX - rect.left) * scaleX,
    y: (clientY - rect.top) * scaleY,
  };
}

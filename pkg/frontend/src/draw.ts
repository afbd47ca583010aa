import type { DragRect } from "./geometry.js";
import type { AnnotationPayload, Violation } from "./types.js";
import { CLASS_COLORS } from "./types.js";

/**
 * Repaint the frame canvas: image, saved boxes color-coded by class, the
 * in-progress drag, and violation markers next to offending boxes. A null
 * context (headless DOM) makes this a no-op; all state lives outside.
 */
export function paintFrame(
  canvas: HTMLCanvasElement,
  image: HTMLImageElement | null,
  annotations: AnnotationPayload[],
  selectedTrack: string | null,
  drag: DragRect | null,
  violations: Violation[]
): void {
  let ctx: CanvasRenderingContext2D | null = null;
  try {
    ctx = canvas.getContext("2d");
  } catch {
    return;
  }
  if (!ctx) return;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (image && image.complete && image.naturalWidth > 0) {
    ctx.drawImage(image, 0, 0, canvas.width, canvas.height);
  } else {
    ctx.fillStyle = "#222";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
  }

  const badTracks = new Set(
    violations.map((v) => v.track_id).filter((t): t is string => t !== undefined)
  );

  for (const a of annotations) {
    const [x0, y0, x1, y1] = a.box;
    ctx.lineWidth = a.track_id === selectedTrack ? 3 : 2;
    ctx.strokeStyle = CLASS_COLORS[a.swimmer_class];
    ctx.setLineDash(badTracks.has(a.track_id) ? [6, 4] : []);
    ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);

    ctx.setLineDash([]);
    ctx.font = "12px sans-serif";
    const tag = `${a.track_id} ${a.swimmer_class}`;
    ctx.fillStyle = CLASS_COLORS[a.swimmer_class];
    ctx.fillText(tag, x0 + 2, Math.max(y0 - 4, 12));

    if (badTracks.has(a.track_id)) {
      const messages = violations.filter((v) => v.track_id === a.track_id);
      ctx.fillStyle = "#ff5555";
      messages.forEach((v, i) => {
        ctx!.fillText(v.message, x0 + 2, y1 + 14 + i * 14);
      });
    }
  }

  if (drag) {
    ctx.lineWidth = 1;
    ctx.strokeStyle = "#ffffff";
    ctx.setLineDash([4, 4]);
    ctx.strokeRect(
      Math.min(drag.x0, drag.x1),
      Math.min(drag.y0, drag.y1),
      Math.abs(drag.x1 - drag.x0),
      Math.abs(drag.y1 - drag.y0)
    );
    ctx.setLineDash([]);
  }
}

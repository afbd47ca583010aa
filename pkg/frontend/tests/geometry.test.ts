import { describe, expect, it } from "vitest";

import {
  clampBox,
  eventToFrame,
  normalizeRect,
  tooSmall,
} from "../src/geometry.js";

describe("normalizeRect", () => {
  it("orders corners regardless of drag direction", () => {
    const expected = { xMin: 10, yMin: 20, xMax: 110, yMax: 220 };
    expect(normalizeRect({ x0: 10, y0: 20, x1: 110, y1: 220 })).toEqual(expected);
    expect(normalizeRect({ x0: 110, y0: 220, x1: 10, y1: 20 })).toEqual(expected);
    expect(normalizeRect({ x0: 110, y0: 20, x1: 10, y1: 220 })).toEqual(expected);
    expect(normalizeRect({ x0: 10, y0: 220, x1: 110, y1: 20 })).toEqual(expected);
  });
});

describe("tooSmall", () => {
  it("rejects stray clicks but keeps real drags", () => {
    expect(tooSmall({ xMin: 5, yMin: 5, xMax: 6, yMax: 40 })).toBe(true);
    expect(tooSmall({ xMin: 5, yMin: 5, xMax: 40, yMax: 6 })).toBe(true);
    expect(tooSmall({ xMin: 5, yMin: 5, xMax: 8, yMax: 8 })).toBe(false);
  });
});

describe("clampBox", () => {
  it("leaves an in-bounds box untouched", () => {
    const box = { xMin: 10, yMin: 10, xMax: 50, yMax: 40 };
    const result = clampBox(box, 100, 100);
    expect(result.box).toEqual(box);
    expect(result.clamped).toBe(false);
  });

  it("clamps overflow and reports it for the truncation flag", () => {
    const result = clampBox({ xMin: -20, yMin: 10, xMax: 130, yMax: 40 }, 100, 100);
    expect(result.box).toEqual({ xMin: 0, yMin: 10, xMax: 100, yMax: 40 });
    expect(result.clamped).toBe(true);
  });

  it("clamps all four edges independently", () => {
    const result = clampBox({ xMin: 5, yMin: -1, xMax: 50, yMax: 101 }, 100, 100);
    expect(result.box.yMin).toBe(0);
    expect(result.box.yMax).toBe(100);
    expect(result.clamped).toBe(true);
  });
});

describe("eventToFrame", () => {
  it("falls back to identity when the canvas has no layout box", () => {
    const canvas = document.createElement("canvas");
    canvas.width = 1280;
    canvas.height = 720;
    expect(eventToFrame(canvas, 200, 150)).toEqual({ x: 200, y: 150 });
  });

  it("scales client coordinates by the css-to-frame ratio", () => {
    const canvas = document.createElement("canvas");
    canvas.width = 1280;
    canvas.height = 720;
    canvas.getBoundingClientRect = () =>
      ({ left: 10, top: 20, width: 640, height: 360 } as DOMRect);
    expect(eventToFrame(canvas, 10 + 320, 20 + 180)).toEqual({ x: 640, y: 360 });
  });
});

/**
 * Rendering is split in two: a pure function from ViewState to a frame
 * description (testable, deterministic), and a canvas painter consuming it.
 */

import { geodesic, translate, translateCircle, type GeodesicArc, type Vec } from "./geometry.js";
import type { ViewState } from "./state.js";

export interface Frame {
  readonly circles: readonly { center: Vec; radius: number }[];
  readonly dots: readonly Vec[];
  readonly arcs: readonly GeodesicArc[];
  readonly indicator: number | null;
  readonly atOptimum: boolean;
}

export function buildFrame(state: ViewState): Frame {
  const v = state.viewpoint;
  const scene = state.bundle.scene;
  const circles = scene.spheres.map((s) =>
    translateCircle(v, { center: s.center, radius: s.radius }),
  );
  const dots = scene.points.map((p) => translate(v, p));
  const arcs = scene.edges.map(([i, j]) => geodesic(dots[i]!, dots[j]!));
  const opt = state.bundle.optimum;
  return {
    circles,
    dots,
    arcs,
    indicator: state.displayedValue,
    atOptimum: opt !== null && v[0] === opt[0] && v[1] === opt[1],
  };
}

const DISK_MARGIN = 0.05;

/** Map disk coordinates to canvas pixels (y up). */
export function toPixels(p: Vec, size: number): Vec {
  const scale = size / (2 * (1 + DISK_MARGIN));
  return [size / 2 + p[0] * scale, size / 2 - p[1] * scale];
}

/** Map canvas pixels back to disk coordinates. */
export function fromPixels(p: Vec, size: number): Vec {
  const scale = size / (2 * (1 + DISK_MARGIN));
  return [(p[0] - size / 2) / scale, (size / 2 - p[1]) / scale];
}

export function paint(ctx: CanvasRenderingContext2D, frame: Frame, size: number): void {
  ctx.clearRect(0, 0, size, size);
  const scale = size / (2 * (1 + DISK_MARGIN));

  ctx.strokeStyle = "#222222";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(size / 2, size / 2, scale, 0, 2 * Math.PI);
  ctx.stroke();

  ctx.strokeStyle = "#1f5fa8";
  ctx.lineWidth = 1.5;
  for (const c of frame.circles) {
    const [cx, cy] = toPixels(c.center, size);
    ctx.beginPath();
    ctx.arc(cx, cy, c.radius * scale, 0, 2 * Math.PI);
    ctx.stroke();
  }

  ctx.strokeStyle = "#3a8a4d";
  for (const a of frame.arcs) {
    ctx.beginPath();
    if (a.kind === "segment" || a.center === undefined || a.radius === undefined) {
      const [x1, y1] = toPixels(a.from, size);
      const [x2, y2] = toPixels(a.to, size);
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
    } else {
      const [cx, cy] = toPixels(a.center, size);
      const a1 = Math.atan2(-(a.from[1] - a.center[1]), a.from[0] - a.center[0]);
      const a2 = Math.atan2(-(a.to[1] - a.center[1]), a.to[0] - a.center[0]);
      // canvas y is flipped, so the sweep flag flips too
      ctx.arc(cx, cy, a.radius * scale, a1, a2, a.ccw === true);
    }
    ctx.stroke();
  }

  ctx.fillStyle = "#c2461f";
  for (const d of frame.dots) {
    const [x, y] = toPixels(d, size);
    ctx.beginPath();
    ctx.arc(x, y, 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

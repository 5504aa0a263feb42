/**
 * Pure canvas rendering: given the session view and mesh faces, draw the
 * wireframe layout with a hexagonal texture preview plus the spline handles.
 * No geometry is computed here; UVs arrive from the server verbatim.
 */

import { EditSessionView } from "./state.js";

/** Structural subset of CanvasRenderingContext2D used by the renderer. */
export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  strokeStyle: string;
  fillStyle: string;
  lineWidth: number;
}

export interface RenderOptions {
  width: number;
  height: number;
  margin: number;
  hexSpacing: number;
}

export const defaultOptions: RenderOptions = {
  width: 720,
  height: 720,
  margin: 24,
  hexSpacing: 0.04,
};

function toScreen(
  uv: [number, number][],
  options: RenderOptions,
): (p: [number, number]) => [number, number] {
  const span = options.width - 2 * options.margin;
  const vSpan = options.height - 2 * options.margin;
  return ([u, v]) => [
    options.margin + u * span,
    options.height - options.margin - v * vSpan,
  ];
}

export function renderFrame(
  ctx: Canvas2D,
  view: EditSessionView,
  edges: [number, number][],
  options: RenderOptions = defaultOptions,
): void {
  ctx.clearRect(0, 0, options.width, options.height);
  const project = toScreen(view.uv, options);

  // hexagonal preview lines in uv space emphasize angle preservation
  ctx.strokeStyle = "#d8d8e8";
  ctx.lineWidth = 1;
  for (const angle of [0, Math.PI / 3, (2 * Math.PI) / 3]) {
    const [c, s] = [Math.cos(angle), Math.sin(angle)];
    for (let offset = -1; offset <= 2; offset += options.hexSpacing) {
      ctx.beginPath();
      const a = project([offset * c - 2 * s, offset * s + 2 * c]);
      const b = project([offset * c + 2 * s, offset * s - 2 * c]);
      ctx.moveTo(a[0], a[1]);
      ctx.lineTo(b[0], b[1]);
      ctx.stroke();
    }
  }

  ctx.strokeStyle = "#556";
  ctx.lineWidth = 1;
  for (const [i, j] of edges) {
    const a = project(view.uv[i]);
    const b = project(view.uv[j]);
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.stroke();
  }

  // spline handles around the frame edge
  ctx.fillStyle = view.validationNotice ? "#c33" : "#2a6";
  for (const handle of view.handles) {
    const angle = 2 * Math.PI * handle.t;
    const r = options.width / 2 - options.margin / 2;
    const cx = options.width / 2 + r * Math.cos(angle);
    const cy = options.height / 2 + r * Math.sin(angle);
    ctx.beginPath();
    ctx.arc(cx, cy, 4 + 2 * Math.min(Math.abs(handle.value), 3), 0, 2 * Math.PI);
    ctx.fill();
  }
}

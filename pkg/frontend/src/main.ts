/**
 * Browser bootstrap: connect to a running editing service, upload an OBJ
 * chosen by the user, and run the edit loop (drag handles -> debounced
 * boundary posts -> render acknowledged layouts).
 */

import { HttpTransport } from "./protocol.js";
import { EditorSession } from "./state.js";
import { Canvas2D, defaultOptions, renderFrame } from "./render.js";

function edgesFromFaces(faces: [number, number, number][]): [number, number][] {
  const seen = new Set<string>();
  const edges: [number, number][] = [];
  for (const [a, b, c] of faces) {
    for (const [i, j] of [[a, b], [b, c], [c, a]] as [number, number][]) {
      const key = i < j ? `${i},${j}` : `${j},${i}`;
      if (!seen.has(key)) {
        seen.add(key);
        edges.push([i, j]);
      }
    }
  }
  return edges;
}

function parseObjFaces(obj: string): [number, number, number][] {
  const faces: [number, number, number][] = [];
  for (const line of obj.split("\n")) {
    const parts = line.trim().split(/\s+/);
    if (parts[0] === "f" && parts.length === 4) {
      const [a, b, c] = parts.slice(1).map((t) => parseInt(t.split("/")[0], 10) - 1);
      faces.push([a, b, c]);
    }
  }
  return faces;
}

async function start(): Promise<void> {
  const serverInput = document.getElementById("server") as HTMLInputElement;
  const fileInput = document.getElementById("meshfile") as HTMLInputElement;
  const modeButton = document.getElementById("toggle-mode") as HTMLButtonElement;
  const status = document.getElementById("status") as HTMLElement;
  const canvas = document.getElementById("layout") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d") as unknown as Canvas2D;

  let session: EditorSession | null = null;
  let edges: [number, number][] = [];
  let dragging = -1;

  const redraw = () => {
    if (!session) return;
    renderFrame(ctx, session.view, edges, defaultOptions);
    const report = session.view.report;
    status.textContent =
      `rev ${session.view.revision} | mode ${session.view.mode}` +
      (report ? ` | Q_avg ${report.qAvg.toFixed(4)}` : "") +
      (session.view.validationNotice ? ` | ${session.view.validationNotice}` : "");
  };

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const obj = await file.text();
    const transport = new HttpTransport(serverInput.value);
    const initial = await transport.postMesh(obj);
    edges = edgesFromFaces(parseObjFaces(obj));
    session = new EditorSession(transport, initial, 12);
    await session.refreshBoundary();
    redraw();
  });

  modeButton.addEventListener("click", async () => {
    if (!session) return;
    await session.toggleMode();
    redraw();
  });

  canvas.addEventListener("pointerdown", (event) => {
    if (!session) return;
    const n = session.view.handles.length;
    const rect = canvas.getBoundingClientRect();
    const x = event.clientX - rect.left - canvas.width / 2;
    const y = event.clientY - rect.top - canvas.height / 2;
    const t = ((Math.atan2(y, x) / (2 * Math.PI)) + 1) % 1;
    dragging = Math.round(t * n) % n;
  });

  canvas.addEventListener("pointermove", (event) => {
    if (!session || dragging < 0) return;
    const rect = canvas.getBoundingClientRect();
    const y = event.clientY - rect.top;
    const value = 4.0 * (1 - y / canvas.height);
    session.dragHandle(dragging, value);
    redraw();
  });

  const finish = () => {
    if (!session || dragging < 0) return;
    dragging = -1;
    session.releaseHandle();
    // render once the acknowledged response lands
    setTimeout(redraw, 120);
  };
  canvas.addEventListener("pointerup", finish);
  canvas.addEventListener("pointerleave", finish);
}

window.addEventListener("DOMContentLoaded", () => {
  void start();
});

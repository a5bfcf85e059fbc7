/** DOM wiring: file picker / URL loading, pointer drags, indicator, snap. */

import { loadBundle, type Bundle } from "./bundle.js";
import { norm2, type Vec } from "./geometry.js";
import { buildFrame, fromPixels, paint } from "./render.js";
import { dragToViewpoint, initialState, snapToOptimum, type ViewState } from "./state.js";

const CANVAS_SIZE = 800;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function formatValue(v: number | null): string {
  return v === null ? "n/a (objective not recomputed client-side)" : v.toFixed(6);
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("disk");
  canvas.width = CANVAS_SIZE;
  canvas.height = CANVAS_SIZE;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("no 2d canvas context");
  const indicator = el<HTMLSpanElement>("indicator");
  const optimal = el<HTMLSpanElement>("optimal");
  const status = el<HTMLSpanElement>("status");
  const snapButton = el<HTMLButtonElement>("snap");
  const filePicker = el<HTMLInputElement>("file");

  let state: ViewState | null = null;
  let dragStart: Vec | null = null;

  function redraw(): void {
    if (!state) return;
    const frame = buildFrame(state);
    paint(ctx!, frame, CANVAS_SIZE);
    indicator.textContent = formatValue(frame.indicator);
    optimal.textContent = frame.atOptimum ? " (at optimum)" : "";
  }

  function setBundle(bundle: Bundle): void {
    state = initialState(bundle);
    snapButton.disabled = bundle.optimum === null;
    const opt =
      bundle.optimumValue === null
        ? "no optimum in bundle"
        : `optimal value ${bundle.optimumValue.toFixed(6)}`;
    status.textContent =
      `loaded: ${bundle.scene.spheres.length} circles, ` +
      `${bundle.scene.points.length} points, objective ${bundle.objective}, ${opt}`;
    redraw();
  }

  filePicker.addEventListener("change", () => {
    const file = filePicker.files?.[0];
    if (!file) return;
    file.text().then((text) => {
      try {
        setBundle(loadBundle(JSON.parse(text)));
      } catch (err) {
        status.textContent = String(err);
        snapButton.disabled = true;
        state = null;
      }
    });
  });

  snapButton.addEventListener("click", () => {
    if (!state) return;
    state = snapToOptimum(state);
    redraw();
  });

  function pointerDisk(ev: PointerEvent): Vec {
    const rect = canvas.getBoundingClientRect();
    const px: Vec = [
      ((ev.clientX - rect.left) * CANVAS_SIZE) / rect.width,
      ((ev.clientY - rect.top) * CANVAS_SIZE) / rect.height,
    ];
    return fromPixels(px, CANVAS_SIZE);
  }

  canvas.addEventListener("pointerdown", (ev) => {
    const p = pointerDisk(ev);
    if (norm2(p) < 1) {
      dragStart = p;
      canvas.setPointerCapture(ev.pointerId);
    }
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!state || !dragStart) return;
    const p = pointerDisk(ev);
    state = dragToViewpoint(state, dragStart, p);
    dragStart = p;
    redraw();
  });
  canvas.addEventListener("pointerup", () => {
    dragStart = null;
  });

  const params = new URLSearchParams(window.location.search);
  const url = params.get("bundle");
  if (url) {
    fetch(url)
      .then((r) => r.json())
      .then((data) => setBundle(loadBundle(data)))
      .catch((err) => {
        status.textContent = `failed to load ${url}: ${err}`;
      });
  }
}

main();

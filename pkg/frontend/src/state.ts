/**
 * Viewer state and its pure transitions. The state is the current
 * viewpoint (rotation stays the identity by design); dragging solves for
 * the unique translation putting the grabbed scene point under the cursor,
 * which makes drag followed by the exact inverse drag restore the viewpoint.
 */

import type { Bundle } from "./bundle.js";
import {
  clampToDisk,
  untranslate,
  viewpointSending,
  type Vec,
} from "./geometry.js";
import { objectiveValue } from "./objective.js";

export interface ViewState {
  readonly bundle: Bundle;
  readonly viewpoint: Vec;
  /** objective at the current viewpoint (null if not recomputable) */
  readonly displayedValue: number | null;
  /** largest displayed value seen this session */
  readonly sessionMax: number;
}

export function initialState(bundle: Bundle): ViewState {
  return withViewpoint(
    { bundle, viewpoint: [0, 0], displayedValue: null, sessionMax: -Infinity },
    bundle.optimum ?? [0, 0],
  );
}

function withViewpoint(state: ViewState, viewpoint: Vec): ViewState {
  const value = objectiveValue(state.bundle.scene, viewpoint);
  const sessionMax =
    value === null ? state.sessionMax : Math.max(state.sessionMax, value);
  return { bundle: state.bundle, viewpoint, displayedValue: value, sessionMax };
}

/**
 * Drag gesture from `from` to `to` (disk coordinates): the scene point
 * rendered at `from` moves to `to`. Gestures ending on or outside the
 * boundary are clamped to radius 1 - 1e-6.
 */
export function dragToViewpoint(state: ViewState, from: Vec, to: Vec): ViewState {
  const start = clampToDisk(from);
  const end = clampToDisk(to);
  if (start[0] === end[0] && start[1] === end[1]) return state;
  const scenePoint = untranslate(state.viewpoint, start);
  return withViewpoint(state, viewpointSending(scenePoint, end));
}

/** Jump to the bundled optimum (exact); no-op for bundles without one. */
export function snapToOptimum(state: ViewState): ViewState {
  if (state.bundle.optimum === null) return state;
  return withViewpoint(state, state.bundle.optimum);
}

export function setViewpoint(state: ViewState, viewpoint: Vec): ViewState {
  return withViewpoint(state, clampToDisk(viewpoint));
}

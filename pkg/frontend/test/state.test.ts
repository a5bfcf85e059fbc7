import { describe, expect, it } from "vitest";

import { loadBundle, type Bundle } from "../src/bundle.js";
import { dist, translate, type Vec } from "../src/geometry.js";
import { sphereSize } from "../src/objective.js";
import {
  dragToViewpoint,
  initialState,
  setViewpoint,
  snapToOptimum,
  type ViewState,
} from "../src/state.js";

function sampleBundle(): Bundle {
  return loadBundle({
    schema: 1,
    scene: {
      schema: 1,
      dimension: 2,
      setting: "ball",
      objective: "radius",
      spheres: [
        { center: [0.5, 0.0], radius: 0.2 },
        { center: [-0.5, 0.0], radius: 0.2 },
      ],
    },
    viewpoint: { poincare: [0, 0], klein: [0, 0] },
    objective_value: 0.2,
    objective: "radius",
  });
}

describe("drag", () => {
  it("zero-length drag leaves the state unchanged", () => {
    const s0 = setViewpoint(initialState(sampleBundle()), [0.2, 0.1]);
    const s1 = dragToViewpoint(s0, [0.3, -0.2], [0.3, -0.2]);
    expect(s1.viewpoint).toEqual(s0.viewpoint);
  });

  it("drag then exact inverse drag restores the viewpoint within 1e-9", () => {
    let state = setViewpoint(initialState(sampleBundle()), [0.25, -0.15]);
    const before = state.viewpoint;
    const g1: Vec = [0.4, 0.1];
    const g2: Vec = [-0.2, 0.35];
    state = dragToViewpoint(state, g1, g2);
    state = dragToViewpoint(state, g2, g1);
    expect(dist(state.viewpoint, before)).toBeLessThan(1e-9);
  });

  it("moves the grabbed scene point under the cursor", () => {
    let state = setViewpoint(initialState(sampleBundle()), [0.25, -0.15]);
    const g1: Vec = [0.4, 0.1];
    const g2: Vec = [-0.2, 0.35];
    // the scene point rendered at g1 before the drag renders at g2 after
    const scenePoint = translate(
      [-state.viewpoint[0], -state.viewpoint[1]],
      g1,
    );
    state = dragToViewpoint(state, g1, g2);
    expect(dist(translate(state.viewpoint, scenePoint), g2)).toBeLessThan(1e-10);
  });

  it("clamps gestures ending on or outside the boundary", () => {
    let state = initialState(sampleBundle());
    state = dragToViewpoint(state, [0.1, 0.0], [1.7, 0.4]);
    expect(
      state.viewpoint[0] ** 2 + state.viewpoint[1] ** 2,
    ).toBeLessThan(1);
  });

  it("dragging an object's center to the disk center maximizes its size over the path", () => {
    const bundle = sampleBundle();
    let state = initialState(bundle);
    // start from a shifted focus so the drag path is nontrivial
    state = setViewpoint(state, [-0.3, 0.2]);
    // hyperbolic center of the circle at (0.5, 0) with radius 0.2: the
    // viewpoint there globally maximizes that circle's displayed size
    const hc = Math.tanh((Math.atanh(0.3) + Math.atanh(0.7)) / 2);
    const center: Vec = [hc, 0.0];
    const sizes: number[] = [];
    // straight cursor path from the object's current rendered position to 0
    let current = translate(state.viewpoint, center);
    const steps = 24;
    for (let k = 1; k <= steps; k++) {
      const target: Vec = [
        (current[0] * (steps - k)) / steps,
        (current[1] * (steps - k)) / steps,
      ];
      state = dragToViewpoint(state, current, target);
      current = target;
      sizes.push(sphereSize(bundle.scene, 0, state.viewpoint));
    }
    const final = sizes[sizes.length - 1]!;
    for (const s of sizes) expect(final).toBeGreaterThanOrEqual(s - 1e-12);
    // the final viewpoint puts the grabbed center at the disk center
    expect(dist(translate(state.viewpoint, center), [0, 0])).toBeLessThan(1e-9);
  });
});

describe("snap", () => {
  it("restores the bundled viewpoint exactly after drags", () => {
    const bundle = sampleBundle();
    let state = initialState(bundle);
    state = dragToViewpoint(state, [0.1, 0.2], [0.4, -0.3]);
    state = dragToViewpoint(state, [0.0, 0.5], [0.2, 0.2]);
    state = snapToOptimum(state);
    expect(state.viewpoint).toEqual(bundle.optimum);
  });

  it("is a no-op on an already optimal state", () => {
    const state = initialState(sampleBundle());
    const snapped = snapToOptimum(state);
    expect(snapped.viewpoint).toEqual(state.viewpoint);
    expect(snapped.displayedValue).toEqual(state.displayedValue);
  });

  it("indicator after snap dominates every value seen during drags", () => {
    const bundle = sampleBundle();
    let state = initialState(bundle);
    const gestures: [Vec, Vec][] = [
      [[0.1, 0.0], [0.45, 0.2]],
      [[0.2, 0.3], [-0.3, -0.4]],
      [[-0.1, 0.2], [0.5, -0.5]],
      [[0.3, 0.1], [0.05, 0.6]],
    ];
    for (const [a, b] of gestures) state = dragToViewpoint(state, a, b);
    const recordedMax = state.sessionMax;
    state = snapToOptimum(state);
    expect(state.displayedValue!).toBeGreaterThanOrEqual(recordedMax - 1e-6);
  });
});

describe("initial state", () => {
  it("starts at the bundled optimum with its value", () => {
    const bundle = sampleBundle();
    const state = initialState(bundle);
    expect(state.viewpoint).toEqual(bundle.optimum);
    expect(state.displayedValue).toBeCloseTo(bundle.optimumValue, 9);
  });
});

describe("bundles without an optimum", () => {
  it("load with snapping disabled (no-op)", () => {
    const bundle = loadBundle({
      schema: 1,
      scene: {
        schema: 1,
        dimension: 2,
        setting: "ball",
        objective: "radius",
        spheres: [{ center: [0.2, 0.0], radius: 0.1 }],
      },
    });
    expect(bundle.optimum).toBeNull();
    let state = initialState(bundle);
    state = dragToViewpoint(state, [0.1, 0.0], [0.3, 0.2]);
    const before = state.viewpoint;
    state = snapToOptimum(state);
    expect(state.viewpoint).toEqual(before);
  });
});

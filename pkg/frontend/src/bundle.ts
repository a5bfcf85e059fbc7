/** Viewer bundle loading and validation (schema 1, disk scenes). */

import type { Vec } from "./geometry.js";

export interface SceneSphere {
  readonly center: Vec;
  readonly radius: number;
}

export interface DiskScene {
  readonly spheres: readonly SceneSphere[];
  readonly points: readonly Vec[];
  readonly weights: readonly number[] | null;
  readonly edges: readonly (readonly [number, number])[];
  readonly objective: string;
}

export interface Bundle {
  readonly scene: DiskScene;
  /** null when the bundle carries no optimum; snapping is then disabled */
  readonly optimum: Vec | null;
  readonly optimumValue: number | null;
  readonly objective: string;
}

function fail(msg: string): never {
  throw new Error(`invalid bundle: ${msg}`);
}

function asVec(x: unknown, what: string): Vec {
  if (!Array.isArray(x) || x.length !== 2 || !x.every((t) => Number.isFinite(t))) {
    fail(`${what} must be a pair of numbers`);
  }
  return [x[0], x[1]];
}

/** Parse and validate a viewer bundle; throws on malformed input. */
export function loadBundle(data: unknown): Bundle {
  if (typeof data !== "object" || data === null) fail("not a JSON object");
  const d = data as Record<string, unknown>;
  if (d.schema !== 1) fail(`unsupported schema ${String(d.schema)}`);
  const sceneRaw = d.scene as Record<string, unknown> | undefined;
  if (!sceneRaw) fail("missing scene");
  if (sceneRaw.setting !== "ball" || sceneRaw.dimension !== 2) {
    fail("viewer supports two-dimensional disk scenes only");
  }
  const objective = typeof sceneRaw.objective === "string" ? sceneRaw.objective : "radius";

  const spheres: SceneSphere[] = [];
  for (const [i, s] of ((sceneRaw.spheres as unknown[]) ?? []).entries()) {
    const sr = s as Record<string, unknown>;
    const center = asVec(sr.center, `sphere ${i} center`);
    const radius = sr.radius;
    if (typeof radius !== "number" || !(radius > 0)) fail(`sphere ${i} radius`);
    spheres.push({ center, radius });
  }
  const points: Vec[] = (((sceneRaw.points as unknown[]) ?? []) as unknown[]).map(
    (p, i) => asVec(p, `point ${i}`),
  );
  const edges: [number, number][] = [];
  for (const [i, e] of ((sceneRaw.edges as unknown[]) ?? []).entries()) {
    if (!Array.isArray(e) || e.length !== 2) fail(`edge ${i}`);
    const [a, b] = e as [number, number];
    if (
      !Number.isInteger(a) || !Number.isInteger(b) || a === b ||
      a < 0 || b < 0 || a >= points.length || b >= points.length
    ) {
      fail(`edge ${i} endpoints`);
    }
    edges.push([a, b]);
  }
  let weights: number[] | null = null;
  if (sceneRaw.weights !== undefined) {
    weights = (sceneRaw.weights as unknown[]).map((w, i) => {
      if (typeof w !== "number" || !(w > 0)) fail(`weight ${i}`);
      return w;
    });
  }

  const vp = d.viewpoint as Record<string, unknown> | undefined;
  let optimum: Vec | null = null;
  let optimumValue: number | null = null;
  if (vp !== undefined) {
    optimum = asVec(vp.poincare, "viewpoint.poincare");
    if (optimum[0] * optimum[0] + optimum[1] * optimum[1] >= 1) {
      fail("viewpoint outside the open disk");
    }
    const value = d.objective_value;
    if (typeof value !== "number" || !Number.isFinite(value)) {
      fail("objective_value");
    }
    optimumValue = value;
  }
  return {
    scene: { spheres, points, weights, edges, objective },
    optimum,
    optimumValue,
    objective,
  };
}

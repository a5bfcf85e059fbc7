/**
 * Client-side objective recomputation for disk scenes: the minimum
 * transformed sphere radius or edge length at a viewpoint. These use
 * independent constructions (three-point circle fits, direct point maps),
 * so they double as a cross-check of the exporter's value.
 */

import type { DiskScene } from "./bundle.js";
import { dist, translate, translateCircle, type Vec } from "./geometry.js";

/** Transformed radius of one scene sphere at the given viewpoint. */
export function sphereSize(scene: DiskScene, index: number, viewpoint: Vec): number {
  const s = scene.spheres[index]!;
  const img = translateCircle(viewpoint, { center: s.center, radius: s.radius });
  const w = scene.weights ? scene.weights[index]! : 1;
  return img.radius / w;
}

/** Transformed length of one scene edge at the given viewpoint. */
export function edgeSize(scene: DiskScene, index: number, viewpoint: Vec): number {
  const [i, j] = scene.edges[index]!;
  return dist(translate(viewpoint, scene.points[i]!), translate(viewpoint, scene.points[j]!));
}

/**
 * The scene's min-size objective at a viewpoint, or null when the scene's
 * objective is not one the viewer recomputes (radius, edge).
 */
export function objectiveValue(scene: DiskScene, viewpoint: Vec): number | null {
  if (scene.objective === "radius" && scene.spheres.length > 0) {
    let best = Infinity;
    for (let i = 0; i < scene.spheres.length; i++) {
      best = Math.min(best, sphereSize(scene, i, viewpoint));
    }
    return best;
  }
  if (scene.objective === "edge" && scene.edges.length > 0) {
    let best = Infinity;
    for (let i = 0; i < scene.edges.length; i++) {
      best = Math.min(best, edgeSize(scene, i, viewpoint));
    }
    return best;
  }
  return null;
}

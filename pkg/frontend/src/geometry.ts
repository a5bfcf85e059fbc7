/**
 * Plane hyperbolic geometry for the Poincare disk: the Mobius translations
 * used for recentering, their action on points and circles, and geodesic
 * arcs. Small closed forms only; all optimization stays in the core.
 */

export type Vec = readonly [number, number];

export const DISK_CLAMP = 1 - 1e-6;

export function norm2(v: Vec): number {
  return v[0] * v[0] + v[1] * v[1];
}

export function dot(a: Vec, b: Vec): number {
  return a[0] * b[0] + a[1] * b[1];
}

export function dist(a: Vec, b: Vec): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

/** Clamp a point to the open disk (radius 1 - 1e-6). */
export function clampToDisk(p: Vec): Vec {
  const n = Math.sqrt(norm2(p));
  if (n <= DISK_CLAMP) return p;
  const s = DISK_CLAMP / n;
  return [p[0] * s, p[1] * s];
}

/**
 * The disk translation taking `a` to the origin:
 * phi_a(x) = ((1-|a|^2)(x-a) - |x-a|^2 a) / (1 - 2<a,x> + |a|^2 |x|^2).
 */
export function translate(a: Vec, x: Vec): Vec {
  const xa: Vec = [x[0] - a[0], x[1] - a[1]];
  const den = 1 - 2 * dot(a, x) + norm2(a) * norm2(x);
  const s = 1 - norm2(a);
  const t = norm2(xa);
  return [(s * xa[0] - t * a[0]) / den, (s * xa[1] - t * a[1]) / den];
}

/** Inverse translation: phi_a^{-1} = phi_{-a}. */
export function untranslate(a: Vec, x: Vec): Vec {
  return translate([-a[0], -a[1]], x);
}

/** Length scaling |phi_a'(x)| of the recentering translation. */
export function conformalFactor(a: Vec, x: Vec): number {
  return (1 - norm2(a)) / (1 - 2 * dot(a, x) + norm2(a) * norm2(x));
}

/**
 * The unique viewpoint whose translation sends `p` to `target`
 * (right cancellation in the Mobius gyrogroup):
 * v = ((1-|g|^2) p - (1-|p|^2) g) / (1 - |g|^2 |p|^2).
 */
export function viewpointSending(p: Vec, target: Vec): Vec {
  const gp = norm2(target);
  const pp = norm2(p);
  const den = 1 - gp * pp;
  return clampToDisk([
    ((1 - gp) * p[0] - (1 - pp) * target[0]) / den,
    ((1 - gp) * p[1] - (1 - pp) * target[1]) / den,
  ]);
}

export interface Circle {
  readonly center: Vec;
  readonly radius: number;
}

/** Circumcircle through three points (they must not be collinear). */
export function circleThrough(p1: Vec, p2: Vec, p3: Vec): Circle {
  const ax = p2[0] - p1[0];
  const ay = p2[1] - p1[1];
  const bx = p3[0] - p1[0];
  const by = p3[1] - p1[1];
  const det = 2 * (ax * by - ay * bx);
  const a2 = ax * ax + ay * ay;
  const b2 = bx * bx + by * by;
  const cx = p1[0] + (by * a2 - ay * b2) / det;
  const cy = p1[1] + (ax * b2 - bx * a2) / det;
  return { center: [cx, cy], radius: Math.hypot(p1[0] - cx, p1[1] - cy) };
}

/**
 * Image of a circle under the translation with viewpoint `a`: Mobius maps
 * send circles to circles, so three mapped boundary points determine it.
 */
export function translateCircle(a: Vec, c: Circle): Circle {
  const angles = [0, (2 * Math.PI) / 3, (4 * Math.PI) / 3];
  const imgs = angles.map((t) =>
    translate(a, [
      c.center[0] + c.radius * Math.cos(t),
      c.center[1] + c.radius * Math.sin(t),
    ]),
  );
  return circleThrough(imgs[0]!, imgs[1]!, imgs[2]!);
}

export interface GeodesicArc {
  readonly kind: "arc" | "segment";
  readonly from: Vec;
  readonly to: Vec;
  /** arc only: center and radius of the circle orthogonal to the disk */
  readonly center?: Vec;
  readonly radius?: number;
  /** arc only: sweep counterclockwise from `from` to `to` */
  readonly ccw?: boolean;
}

/**
 * The Poincare geodesic between two disk points: an arc of the circle
 * through them orthogonal to the unit circle, or a diameter segment when
 * they are collinear with the origin.
 */
export function geodesic(u: Vec, v: Vec): GeodesicArc {
  const cross = u[0] * v[1] - u[1] * v[0];
  if (Math.abs(cross) < 1e-9) {
    return { kind: "segment", from: u, to: v };
  }
  // center c solves 2<u,c> = |u|^2 + 1 and 2<v,c> = |v|^2 + 1
  const det = 4 * (u[0] * v[1] - u[1] * v[0]);
  const bu = norm2(u) + 1;
  const bv = norm2(v) + 1;
  const cx = (2 * (v[1] * bu - u[1] * bv)) / det;
  const cy = (2 * (u[0] * bv - v[0] * bu)) / det;
  const r = Math.sqrt(Math.max(0, cx * cx + cy * cy - 1));
  return {
    kind: "arc",
    from: u,
    to: v,
    center: [cx, cy],
    radius: r,
    ccw: cross < 0,
  };
}

import { describe, expect, it } from "vitest";

import {
  circleThrough,
  clampToDisk,
  conformalFactor,
  dist,
  geodesic,
  norm2,
  translate,
  translateCircle,
  untranslate,
  viewpointSending,
  type Vec,
} from "../src/geometry.js";

function rng(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    // xorshift32
    s ^= s << 13;
    s ^= s >>> 17;
    s ^= s << 5;
    s >>>= 0;
    return s / 4294967296;
  };
}

function randomDiskPoint(r: () => number, rmax = 0.9): Vec {
  const t = 2 * Math.PI * r();
  const rad = rmax * Math.sqrt(r());
  return [rad * Math.cos(t), rad * Math.sin(t)];
}

describe("translate", () => {
  it("sends the viewpoint to the origin", () => {
    const r = rng(1);
    for (let k = 0; k < 100; k++) {
      const a = randomDiskPoint(r);
      const img = translate(a, a);
      expect(Math.hypot(img[0], img[1])).toBeLessThan(1e-12);
    }
  });

  it("matches the frozen core example", () => {
    const img = translate([0.5, 0], [-0.5, 0]);
    expect(img[0]).toBeCloseTo(-0.8, 12);
    expect(img[1]).toBeCloseTo(0, 12);
  });

  it("inverts exactly through untranslate", () => {
    const r = rng(2);
    for (let k = 0; k < 200; k++) {
      const a = randomDiskPoint(r);
      const x = randomDiskPoint(r, 0.95);
      const back = untranslate(a, translate(a, x));
      expect(dist(back, x)).toBeLessThan(1e-12);
    }
  });

  it("preserves the unit disk", () => {
    const r = rng(3);
    for (let k = 0; k < 200; k++) {
      const a = randomDiskPoint(r);
      const x = randomDiskPoint(r, 0.999);
      expect(norm2(translate(a, x))).toBeLessThan(1);
    }
  });
});

describe("viewpointSending", () => {
  it("solves translate(v, p) = target", () => {
    const r = rng(4);
    for (let k = 0; k < 300; k++) {
      const p = randomDiskPoint(r, 0.95);
      const target = randomDiskPoint(r, 0.95);
      const v = viewpointSending(p, target);
      expect(dist(translate(v, p), target)).toBeLessThan(1e-10);
    }
  });

  it("is the point itself when the target is the origin", () => {
    const r = rng(5);
    for (let k = 0; k < 50; k++) {
      const p = randomDiskPoint(r);
      const v = viewpointSending(p, [0, 0]);
      expect(dist(v, p)).toBeLessThan(1e-12);
    }
  });
});

describe("circle mapping", () => {
  it("reproduces the frozen transformed circle", () => {
    const img = translateCircle([0.5, 0], { center: [0, 0], radius: 0.5 });
    expect(img.center[0]).toBeCloseTo(-0.4, 10);
    expect(img.center[1]).toBeCloseTo(0, 10);
    expect(img.radius).toBeCloseTo(0.4, 10);
  });

  it("circle images contain mapped boundary points", () => {
    const r = rng(6);
    for (let k = 0; k < 100; k++) {
      const a = randomDiskPoint(r, 0.7);
      const cRad = 0.05 + 0.3 * r();
      const cCen = randomDiskPoint(r, 0.9 - cRad - 0.05);
      const img = translateCircle(a, { center: cCen, radius: cRad });
      const t = 2 * Math.PI * r();
      const boundary: Vec = [
        cCen[0] + cRad * Math.cos(t),
        cCen[1] + cRad * Math.sin(t),
      ];
      const mapped = translate(a, boundary);
      expect(Math.abs(dist(mapped, img.center) - img.radius)).toBeLessThan(1e-9);
    }
  });

  it("circumcircle through three points is exact", () => {
    const c = circleThrough([1, 0], [0, 1], [-1, 0]);
    expect(c.center[0]).toBeCloseTo(0, 12);
    expect(c.center[1]).toBeCloseTo(0, 12);
    expect(c.radius).toBeCloseTo(1, 12);
  });
});

describe("conformal factor", () => {
  it("matches finite differences of the translation", () => {
    const r = rng(7);
    const h = 1e-6;
    for (let k = 0; k < 100; k++) {
      const a = randomDiskPoint(r, 0.8);
      const x = randomDiskPoint(r, 0.85);
      const lam = conformalFactor(a, x);
      const dx =
        dist(translate(a, [x[0] + h, x[1]]), translate(a, [x[0] - h, x[1]])) /
        (2 * h);
      expect(Math.abs(dx - lam) / lam).toBeLessThan(1e-5);
    }
  });
});

describe("geodesic", () => {
  it("is a diameter segment through the origin", () => {
    const g = geodesic([0.5, 0], [-0.3, 0]);
    expect(g.kind).toBe("segment");
  });

  it("arcs meet the unit circle orthogonally", () => {
    const r = rng(8);
    for (let k = 0; k < 100; k++) {
      const u = randomDiskPoint(r, 0.9);
      const v = randomDiskPoint(r, 0.9);
      const g = geodesic(u, v);
      if (g.kind === "segment") continue;
      // orthogonality: |center|^2 = radius^2 + 1
      expect(norm2(g.center!) - g.radius! * g.radius!).toBeCloseTo(1, 9);
      // passes through both endpoints
      expect(Math.abs(dist(u, g.center!) - g.radius!)).toBeLessThan(1e-9);
      expect(Math.abs(dist(v, g.center!) - g.radius!)).toBeLessThan(1e-9);
    }
  });
});

describe("clampToDisk", () => {
  it("keeps interior points and clamps boundary ones", () => {
    expect(clampToDisk([0.3, 0.4])).toEqual([0.3, 0.4]);
    const clamped = clampToDisk([2, 0]);
    expect(Math.hypot(clamped[0], clamped[1])).toBeCloseTo(1 - 1e-6, 12);
  });
});

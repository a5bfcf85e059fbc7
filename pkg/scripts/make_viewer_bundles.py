#!/usr/bin/env python3
"""Generate golden viewer bundles: random disk scenes with their optima.

The bundles feed the browser viewer's test fixtures; half use the radius
objective, half the edge objective (the two the viewer recomputes
client-side).
"""

import argparse
import json
import pathlib
import sys

import numpy as np

from mobius_opt.pipeline import Scene, export_viewer_bundle, run
from mobius_opt.solver import SolverConfig


def random_scene(rng, objective: str) -> Scene:
    if objective == "radius":
        n = int(rng.integers(3, 9))
        dirs = rng.standard_normal((n, 2))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        centers = dirs * 0.7 * rng.uniform(0, 1, (n, 1)) ** 0.5
        gaps = 1 - np.linalg.norm(centers, axis=1)
        radii = gaps * rng.uniform(0.15, 0.6, n)
        return Scene(
            dimension=2,
            setting="ball",
            spheres=tuple((tuple(c), float(r)) for c, r in zip(centers, radii)),
            objective="radius",
        )
    n = int(rng.integers(4, 10))
    dirs = rng.standard_normal((n, 2))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    pts = dirs * 0.85 * rng.uniform(0.1, 1, (n, 1)) ** 0.5
    edges = sorted({(i, (i + int(k)) % n) for i, k in
                    enumerate(rng.integers(1, n - 1, n))}
                   | {(i, (i + 1) % n) for i in range(n)})
    edges = [(min(i, j), max(i, j)) for i, j in edges if i != j]
    return Scene(
        dimension=2,
        setting="ball",
        points=tuple(tuple(p) for p in pts),
        edges=tuple(sorted(set(edges))),
        objective="edge",
    )


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="frontend/test/golden")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    for k in range(args.count):
        objective = "radius" if k % 2 == 0 else "edge"
        scene = random_scene(rng, objective)
        result = run(scene, SolverConfig(rng_seed=k))
        bundle = export_viewer_bundle(scene, result)
        path = outdir / f"bundle_{k:02d}.json"
        path.write_text(json.dumps(bundle, indent=2) + "\n")
        print(f"{path}  ({objective}, value {bundle['objective_value']:.6f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())

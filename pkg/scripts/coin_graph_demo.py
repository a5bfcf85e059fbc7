#!/usr/bin/env python3
"""Coin-graph pipeline demo: embed, augment, pack, optimize, render.

Takes a small embedded planar graph (default: the 4-cycle, whose augmented
packing is the octahedron), computes its coin representation, finds the
Mobius transformation equalizing the cap radii, and writes before/after SVG
drawings plus the optimization result.
"""

import argparse
import json
import math
import pathlib
import sys

from mobius_opt.geometry import cap_pole_radius
from mobius_opt.packing import EmbeddedGraph, augment, pack
from mobius_opt.pipeline import Scene, pack_to_json, render_svg, run
from mobius_opt.solver import SolverConfig


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", help="graph JSON ({'rotation': [[...], ...]})")
    ap.add_argument("--outdir", default="coin_demo", help="output directory")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if args.graph:
        data = json.loads(pathlib.Path(args.graph).read_text())
        graph = EmbeddedGraph(tuple(tuple(r) for r in data["rotation"]))
    else:
        graph = EmbeddedGraph(((3, 1), (0, 2), (1, 3), (2, 0)))  # C4

    markers = frozenset()
    if not graph.is_maximal():
        graph, markers = augment(graph)
        print(f"augmented to {graph.n_vertices} vertices "
              f"({len(markers)} face vertices added)")

    packing = pack(graph)
    print(f"packed: residual {packing.residual:.2e}")

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "packing.svg").write_text(render_svg(packing))
    (outdir / "packing.json").write_text(
        json.dumps(pack_to_json(packing, markers), indent=2) + "\n"
    )

    caps = [cap_pole_radius(c) for c in packing.circles]
    scene = Scene(
        dimension=2,
        setting="sphere",
        spheres=tuple((tuple(map(float, p)), float(t)) for p, t in caps),
        objective="radius",
    )
    result = run(scene, SolverConfig(rng_seed=args.seed))
    degs = sorted(math.degrees(r) for r in result.sizes)
    print(f"optimal min cap radius: {math.degrees(result.objective_value):.4f} deg")
    print(f"cap radii range after recentering: {degs[0]:.4f} .. {degs[-1]:.4f} deg")
    (outdir / "result.json").write_text(json.dumps(result.to_json(), indent=2) + "\n")
    (outdir / "optimized.svg").write_text(render_svg(result))
    print(f"wrote {outdir}/packing.svg, packing.json, result.json, optimized.svg")
    return 0


if __name__ == "__main__":
    sys.exit(main())

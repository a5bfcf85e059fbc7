"""Command-line interface.

Subcommands: optimize-radii, optimize-edges, optimize-points, focus, mesh,
flatmap, pack, render, export-viewer.  Scenes, results, packings, and meshes
travel as JSON; drawings as SVG.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import pipeline
from .packing import augment, pack
from .solver import SolverConfig


def _add_common(p: argparse.ArgumentParser, output_default: str):
    p.add_argument("--input", required=True, help="input JSON file")
    p.add_argument("--output", default=output_default, help="output file")
    p.add_argument("--backend", choices=("local", "glp"), default="local")
    p.add_argument("--tol", type=float, default=1e-9, help="objective tolerance")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--max-iters", type=int, default=50_000)


def _config(args) -> SolverConfig:
    return SolverConfig(
        backend=args.backend,
        tol_f=args.tol,
        max_iters=args.max_iters,
        rng_seed=args.seed,
    )


def _load(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _dump(data, path: str):
    text = json.dumps(data, indent=2) + "\n" if not isinstance(data, str) else data
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _scene(args, objective: str | None) -> pipeline.Scene:
    data = _load(args.input)
    if objective is not None:
        data = dict(data)
        data["objective"] = objective
    return pipeline.Scene.from_json(data)


def _run_command(args, objective: str | None) -> int:
    scene = _scene(args, objective)
    result = pipeline.run(scene, _config(args))
    _dump(result.to_json(), args.output)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mobius-opt",
        description="Optimal Mobius transformations by quasiconvex programming",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, objective, blurb in (
        ("optimize-radii", "radius", "maximize the minimum sphere/cap radius"),
        ("optimize-edges", "edge", "maximize the minimum edge length"),
        ("optimize-points", "separation", "maximize the minimum point separation"),
        ("focus", None, "browser focus: objective taken from the scene"),
        ("flatmap", "radius", "weighted radius optimization for flat maps"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_common(p, "result.json")
        p.set_defaults(func=lambda a, obj=objective: _run_command(a, obj))
        if name == "flatmap":
            p.add_argument(
                "--weights-from-mesh",
                action="store_true",
                help="derive sphere weights from the 'mesh' block "
                "(3-D positions and edges) of the input",
            )
            p.set_defaults(func=_flatmap)

    p = sub.add_parser("mesh", help="conformal structured mesh on the disk")
    _add_common(p, "mesh.json")
    p.set_defaults(func=_mesh)

    p = sub.add_parser("pack", help="circle-pack an embedded planar graph")
    p.add_argument("--input", required=True, help="graph JSON (rotation system)")
    p.add_argument("--output", default="packing.json")
    p.add_argument(
        "--no-augment",
        action="store_true",
        help="fail on non-maximal graphs instead of augmenting them",
    )
    p.set_defaults(func=_pack)

    p = sub.add_parser("render", help="draw a scene/result/packing/mesh as SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="out.svg")
    p.set_defaults(func=_render)

    p = sub.add_parser("export-viewer", help="bundle a scene and its optimum")
    _add_common(p, "bundle.json")
    p.set_defaults(func=_export_viewer)

    args = parser.parse_args(argv)
    return args.func(args)


def _flatmap(args) -> int:
    data = _load(args.input)
    data = dict(data)
    data["objective"] = "radius"
    if getattr(args, "weights_from_mesh", False):
        mesh_block = data.get("mesh")
        if not mesh_block:
            raise SystemExit("--weights-from-mesh needs a 'mesh' block in the input")
        data["weights"] = pipeline.incident_edge_weights(
            mesh_block["positions"], mesh_block["edges"]
        )
    scene = pipeline.Scene.from_json(data)
    result = pipeline.run(scene, _config(args))
    _dump(result.to_json(), args.output)
    return 0


def _mesh(args) -> int:
    scene = pipeline.Scene.from_json({**_load(args.input), "objective": "size"})
    mesh_obj = pipeline.mesh(scene, _config(args))
    _dump(mesh_obj.to_json(), args.output)
    return 0


def _pack(args) -> int:
    graph = pipeline.graph_from_json(_load(args.input))
    markers: frozenset[int] = frozenset()
    if not graph.is_maximal():
        if args.no_augment:
            raise SystemExit("graph is not maximal planar; run without --no-augment")
        graph, markers = augment(graph)
    packing = pack(graph)
    _dump(pipeline.pack_to_json(packing, markers), args.output)
    return 0


def _render(args) -> int:
    data = _load(args.input)
    if "quads" in data:
        import numpy as np

        obj = pipeline.StructuredMesh(
            nodes=np.asarray(data["nodes"], float),
            quads=tuple(tuple(q) for q in data["quads"]),
            pullback=np.asarray(data["pullback"], float),
            rings=data.get("rings", 0),
            sectors=data.get("sectors", 0),
            spacing=data.get("spacing", 0.0),
            viewpoint_poincare=tuple(data.get("viewpoint", {}).get("poincare", ())),
            min_size=data.get("min_size", 0.0),
        )
    elif "planar" in data:
        svg = _render_packing_json(data)
        _dump(svg, args.output)
        return 0
    elif "viewpoint" in data:
        obj = _result_from_json(data)
    else:
        obj = pipeline.Scene.from_json(data)
    _dump(pipeline.render_svg(obj), args.output)
    return 0


def _render_packing_json(data: dict) -> str:
    from .pipeline import _svg_circle  # same drawing conventions

    body = [
        _svg_circle(c, float(r))
        for c, r in zip(data["planar"]["centers"], data["planar"]["radii"])
    ]
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" '
        'viewBox="-1.05 -1.05 2.1 2.1">',
        '<g transform="scale(1,-1)">',
        _svg_circle((0.0, 0.0), 1.0, stroke="#000000", width=0.006),
        *body,
        "</g>",
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def _result_from_json(data: dict) -> pipeline.Result:
    diag = data.get("diagnostics", {})
    return pipeline.Result(
        objective=data.get("objective", "radius"),
        setting=data.get("setting", "ball"),
        dimension=int(data.get("dimension", 2)),
        viewpoint_poincare=tuple(data["viewpoint"]["poincare"]),
        viewpoint_klein=tuple(data["viewpoint"]["klein"]),
        objective_value=data["objective_value"],
        transformed_spheres=tuple(
            (tuple(s["center"]), s["radius"])
            for s in data.get("transformed", {}).get("spheres", ())
        ),
        transformed_points=tuple(
            tuple(p) for p in data.get("transformed", {}).get("points", ())
        ),
        sizes=tuple(data.get("sizes", ())),
        iterations=diag.get("iterations", 0),
        converged=diag.get("converged", True),
        backend=diag.get("backend", "local"),
        active=tuple(diag.get("active", ())),
        seed=diag.get("seed", 0),
        rounds=diag.get("rounds", 0),
    )


def _export_viewer(args) -> int:
    scene = _scene(args, None)
    result = pipeline.run(scene, _config(args))
    _dump(pipeline.export_viewer_bundle(scene, result), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Scene files, application drivers, and exporters.

A :class:`Scene` is the serializable problem description consumed by the CLI
and the viewer (schema version 1).  ``run`` dispatches on the objective
selector to build quasiconvex terms and returns a :class:`Result`; ``mesh``
drives conformal structured meshing on the disk; ``render_svg`` draws
two-dimensional content; ``export_viewer_bundle`` feeds the interactive
browser.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .accel import PointSet, maxmin_separation
from .errors import SceneValidationError, UnsupportedDimension
from .geometry import (
    InversiveVector,
    Setting,
    apply_sphere,
    cap_pole_radius,
    conformal_factor,
    euclidean_center_radius,
    klein_to_poincare,
    poincare_to_klein,
    recenter_map,
)
from .objectives import (
    ball_edge_term,
    ball_sphere_radius_term,
    cap_radius_term,
    klein_disk_size_term,
    make_instance,
    orientation_barrier_term,
    point_size_term,
    sphere_edge_term,
)
from .packing import EmbeddedGraph, Packing, augment, pack
from .solver import SolverConfig, minimize_max

SCHEMA_VERSION = 1

OBJECTIVES = ("radius", "edge", "separation", "size", "klein-diameter", "klein-width")


@dataclass(frozen=True)
class Scene:
    """Problem description: geometry plus an objective selector."""

    dimension: int
    setting: str
    spheres: tuple = ()
    points: tuple = ()
    weights: tuple | None = None
    edges: tuple = ()
    orientation_faces: tuple = ()
    objective: str = "radius"

    def __post_init__(self):
        if self.setting not in ("ball", "sphere"):
            raise SceneValidationError(f"unknown setting {self.setting!r}")
        if self.dimension < 1:
            raise SceneValidationError("dimension must be >= 1")
        if self.objective not in OBJECTIVES:
            raise SceneValidationError(f"unknown objective {self.objective!r}")
        object.__setattr__(self, "spheres", tuple(
            (tuple(float(x) for x in c), float(r)) for c, r in self.spheres
        ))
        object.__setattr__(self, "points", tuple(
            tuple(float(x) for x in p) for p in self.points
        ))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "edges", tuple(
            (int(i), int(j)) for i, j in self.edges
        ))
        object.__setattr__(self, "orientation_faces", tuple(
            tuple(int(i) for i in f) for f in self.orientation_faces
        ))
        self._validate()

    @property
    def geometry_setting(self) -> Setting:
        return Setting(self.setting, self.dimension)

    @property
    def point_dim(self) -> int:
        return self.geometry_setting.n_spatial

    def _validate(self):
        k = self.point_dim
        for i, (c, r) in enumerate(self.spheres):
            if len(c) != k:
                raise SceneValidationError(
                    f"sphere {i}: expected {k} center/pole coordinates, got {len(c)}"
                )
            if self.setting == "ball":
                if r <= 0:
                    raise SceneValidationError(f"sphere {i}: radius must be positive")
                if np.linalg.norm(c) + r > 1 + 1e-9:
                    raise SceneValidationError(
                        f"sphere {i}: must be contained in the unit ball"
                    )
            else:
                if not 0 < r < math.pi:
                    raise SceneValidationError(
                        f"sphere {i}: cap angle must lie in (0, pi)"
                    )
                if np.linalg.norm(c) < 1e-12:
                    raise SceneValidationError(f"sphere {i}: zero pole vector")
        for i, p in enumerate(self.points):
            if len(p) != k:
                raise SceneValidationError(
                    f"point {i}: expected {k} coordinates, got {len(p)}"
                )
            nrm = float(np.linalg.norm(p))
            if self.setting == "ball" and nrm >= 1:
                raise SceneValidationError(f"point {i}: must lie inside the unit ball")
            if self.setting == "sphere" and abs(nrm - 1) > 1e-6:
                raise SceneValidationError(f"point {i}: must lie on the unit sphere")
        if self.weights is not None:
            expected = len(self.spheres) if self.objective in (
                "radius", "klein-diameter", "klein-width") else len(self.points)
            if len(self.weights) != expected:
                raise SceneValidationError(
                    f"weights: expected {expected} entries for objective "
                    f"{self.objective!r}, got {len(self.weights)}"
                )
            for i, w in enumerate(self.weights):
                if w <= 0:
                    raise SceneValidationError(f"weight {i}: must be positive")
        n = len(self.points)
        for e, (i, j) in enumerate(self.edges):
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise SceneValidationError(f"edge {e}: bad endpoints ({i}, {j})")
        for f, tri in enumerate(self.orientation_faces):
            if len(tri) != 3 or len(set(tri)) != 3 or not all(0 <= i < n for i in tri):
                raise SceneValidationError(f"orientation face {f}: bad triple {tri}")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "dimension": self.dimension,
            "setting": self.setting,
            "objective": self.objective,
        }
        if self.spheres:
            if self.setting == "ball":
                out["spheres"] = [
                    {"center": list(c), "radius": r} for c, r in self.spheres
                ]
            else:
                out["spheres"] = [
                    {"pole": list(c), "theta": r} for c, r in self.spheres
                ]
        if self.points:
            out["points"] = [list(p) for p in self.points]
        if self.weights is not None:
            out["weights"] = list(self.weights)
        if self.edges:
            out["edges"] = [list(e) for e in self.edges]
        if self.orientation_faces:
            out["orientation_faces"] = [list(f) for f in self.orientation_faces]
        return out

    @staticmethod
    def from_json(data: dict) -> "Scene":
        if not isinstance(data, dict):
            raise SceneValidationError("scene must be a JSON object")
        if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise SceneValidationError(f"unsupported schema {data.get('schema')!r}")
        setting = data.get("setting", "ball")
        spheres = []
        for i, s in enumerate(data.get("spheres", ())):
            if setting == "ball":
                if "center" not in s or "radius" not in s:
                    raise SceneValidationError(f"sphere {i}: needs center and radius")
                spheres.append((tuple(s["center"]), s["radius"]))
            else:
                if "pole" not in s or "theta" not in s:
                    raise SceneValidationError(f"sphere {i}: needs pole and theta")
                spheres.append((tuple(s["pole"]), s["theta"]))
        return Scene(
            dimension=int(data.get("dimension", 2)),
            setting=setting,
            spheres=tuple(spheres),
            points=tuple(tuple(p) for p in data.get("points", ())),
            weights=tuple(data["weights"]) if "weights" in data else None,
            edges=tuple(tuple(e) for e in data.get("edges", ())),
            orientation_faces=tuple(tuple(f) for f in data.get("orientation_faces", ())),
            objective=data.get("objective", "radius"),
        )


@dataclass(frozen=True)
class Result:
    """Optimal viewpoint plus transformed objects and solver diagnostics."""

    objective: str
    setting: str
    dimension: int
    viewpoint_poincare: tuple
    viewpoint_klein: tuple
    objective_value: float
    transformed_spheres: tuple
    transformed_points: tuple
    sizes: tuple
    iterations: int
    converged: bool
    backend: str
    active: tuple
    seed: int
    rounds: int = 0

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "objective": self.objective,
            "setting": self.setting,
            "dimension": self.dimension,
            "viewpoint": {
                "poincare": list(self.viewpoint_poincare),
                "klein": list(self.viewpoint_klein),
            },
            "objective_value": self.objective_value,
            "transformed": {
                "spheres": [
                    {"center": list(c), "radius": r}
                    for c, r in self.transformed_spheres
                ],
                "points": [list(p) for p in self.transformed_points],
            },
            "sizes": list(self.sizes),
            "diagnostics": {
                "iterations": self.iterations,
                "converged": self.converged,
                "backend": self.backend,
                "active": list(self.active),
                "seed": self.seed,
                "rounds": self.rounds,
            },
        }


def _scene_vectors(scene: Scene) -> list[InversiveVector]:
    if scene.setting == "ball":
        return [
            InversiveVector.from_center_radius(np.asarray(c), r)
            for c, r in scene.spheres
        ]
    return [InversiveVector.from_cap(np.asarray(c), r) for c, r in scene.spheres]


def _weight(scene: Scene, i: int) -> float:
    return scene.weights[i] if scene.weights is not None else 1.0


def _build_terms(scene: Scene):
    setting = scene.geometry_setting
    objective = scene.objective
    terms = []
    if objective in ("radius", "klein-diameter", "klein-width"):
        if not scene.spheres:
            raise SceneValidationError(f"objective {objective!r} needs spheres")
        vectors = _scene_vectors(scene)
        for i, v in enumerate(vectors):
            if objective == "radius":
                if scene.setting == "ball":
                    terms.append(ball_sphere_radius_term(v, _weight(scene, i), source=i))
                else:
                    terms.append(cap_radius_term(v, _weight(scene, i), source=i))
            else:
                if scene.setting != "ball":
                    raise SceneValidationError(
                        "Klein measures are defined for the ball setting"
                    )
                measure = "diameter" if objective == "klein-diameter" else "width"
                terms.append(
                    klein_disk_size_term(v, measure, _weight(scene, i), source=i)
                )
    elif objective == "size":
        if not scene.points:
            raise SceneValidationError("objective 'size' needs points")
        if scene.setting != "ball":
            raise SceneValidationError("objective 'size' is defined for the ball setting")
        for i, p in enumerate(scene.points):
            terms.append(point_size_term(np.asarray(p), _weight(scene, i), source=i))
    elif objective == "edge":
        if not scene.edges:
            raise SceneValidationError("objective 'edge' needs edges")
        pts = [np.asarray(p) for p in scene.points]
        for e, (i, j) in enumerate(scene.edges):
            if scene.setting == "ball":
                terms.append(ball_edge_term(pts[i], pts[j], source=e))
            else:
                terms.append(sphere_edge_term(pts[i], pts[j], source=e))
    else:
        raise AssertionError(objective)
    terms.extend(_barrier_terms(scene))
    return terms


def _barrier_terms(scene: Scene):
    setting = scene.geometry_setting
    out = []
    for f, (i, j, k) in enumerate(scene.orientation_faces):
        pts = [np.asarray(scene.points[t]) for t in (i, j, k)]
        out.append(
            orientation_barrier_term(*pts, setting=setting, source=("face", f))
        )
    return out


def _transform_objects(scene: Scene, viewpoint_poincare: np.ndarray):
    setting = scene.geometry_setting
    m = recenter_map(viewpoint_poincare, setting)
    spheres = []
    for v in _scene_vectors(scene):
        img = apply_sphere(m, v)
        if scene.setting == "ball":
            c, r = euclidean_center_radius(img)
        else:
            c, r = cap_pole_radius(img)
        spheres.append((tuple(float(x) for x in c), float(r)))
    points = []
    if scene.points:
        from .geometry import encode_point

        enc = np.array([encode_point(np.asarray(p), setting) for p in scene.points])
        w = enc @ m.matrix.T
        if scene.setting == "ball":
            dec = w[:, :-2] / (w[:, -1] - w[:, -2])[:, None]
        else:
            dec = w[:, :-1] / w[:, -1][:, None]
        points = [tuple(float(x) for x in p) for p in dec]
    return tuple(spheres), tuple(points)


def _sizes_at(scene: Scene, terms, x_klein: np.ndarray) -> tuple:
    return tuple(
        float(t.natural_size(x_klein)) for t in terms if t.natural_size is not None
    )


def run(scene: Scene, config: SolverConfig = SolverConfig()) -> Result:
    """Optimize the scene's objective and report the transformed geometry."""
    if scene.objective == "separation":
        return _run_separation(scene, config)
    terms = _build_terms(scene)
    inst = make_instance(terms)
    sol = minimize_max(inst, config)
    xk = sol.x_star.coords
    zp = klein_to_poincare(xk).coords
    spheres, points = _transform_objects(scene, zp)
    sizes = _sizes_at(scene, terms, xk)
    return Result(
        objective=scene.objective,
        setting=scene.setting,
        dimension=scene.dimension,
        viewpoint_poincare=tuple(float(v) for v in zp),
        viewpoint_klein=tuple(float(v) for v in xk),
        objective_value=-sol.t_star,
        transformed_spheres=spheres,
        transformed_points=points,
        sizes=sizes,
        iterations=sol.iterations,
        converged=sol.converged,
        backend=sol.backend,
        active=sol.active,
        seed=config.rng_seed,
    )


def _run_separation(scene: Scene, config: SolverConfig) -> Result:
    if len(scene.points) < 2:
        raise SceneValidationError("objective 'separation' needs at least two points")
    ps = PointSet(np.asarray(scene.points, float), scene.geometry_setting)
    extra = _barrier_terms(scene)
    res = maxmin_separation(ps, config, extra_terms=extra)
    sol = res.solution
    xk = sol.x_star.coords
    zp = klein_to_poincare(xk).coords
    spheres, points = _transform_objects(scene, zp)
    return Result(
        objective=scene.objective,
        setting=scene.setting,
        dimension=scene.dimension,
        viewpoint_poincare=tuple(float(v) for v in zp),
        viewpoint_klein=tuple(float(v) for v in xk),
        objective_value=-sol.t_star,
        transformed_spheres=spheres,
        transformed_points=points,
        sizes=(),
        iterations=sol.iterations,
        converged=sol.converged,
        backend=sol.backend,
        active=sol.active,
        seed=config.rng_seed,
        rounds=res.rounds,
    )


# ---------------------------------------------------------------------------
# Conformal structured meshing


@dataclass(frozen=True)
class StructuredMesh:
    """Polar template mesh in the optimized disk plus its pullback."""

    nodes: np.ndarray           # template-disk coordinates
    quads: tuple                # cells; a repeated last index marks a triangle
    pullback: np.ndarray        # node coordinates in the original disk
    rings: int
    sectors: int
    spacing: float
    viewpoint_poincare: tuple
    min_size: float

    @property
    def n_elements(self) -> int:
        return len(self.quads)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "nodes": [list(map(float, p)) for p in self.nodes],
            "quads": [list(map(int, q)) for q in self.quads],
            "pullback": [list(map(float, p)) for p in self.pullback],
            "rings": self.rings,
            "sectors": self.sectors,
            "spacing": self.spacing,
            "viewpoint": {"poincare": list(self.viewpoint_poincare)},
            "min_size": self.min_size,
        }


def mesh(scene: Scene, config: SolverConfig = SolverConfig(),
         max_elements: int = 200_000) -> StructuredMesh:
    """Optimize marked element sizes, build the polar template with spacing
    min s'_i in the transformed disk, and pull it back."""
    if scene.setting != "ball" or scene.dimension != 2:
        raise SceneValidationError("mesh driver needs a two-dimensional ball scene")
    if not scene.points:
        raise SceneValidationError("mesh driver needs at least one marked point")
    size_scene = Scene(
        dimension=2,
        setting="ball",
        points=scene.points,
        weights=scene.weights,
        orientation_faces=scene.orientation_faces,
        objective="size",
    )
    result = run(size_scene, config)
    z = np.asarray(result.viewpoint_poincare)
    h = min(result.sizes)
    sectors = max(3, math.ceil(2 * math.pi / h))
    rings = max(1, math.ceil(1.0 / h))
    if (rings * sectors) > max_elements:
        raise SceneValidationError(
            f"mesh would need {rings * sectors} elements (> {max_elements}); "
            "increase the marked sizes"
        )
    nodes = [np.zeros(2)]
    for k in range(1, rings + 1):
        r = k / rings
        for j in range(sectors):
            phi = 2 * math.pi * j / sectors
            nodes.append(np.array([r * math.cos(phi), r * math.sin(phi)]))
    nodes = np.asarray(nodes)

    def nid(k, j):
        return 1 + (k - 1) * sectors + (j % sectors)

    cells = []
    for j in range(sectors):
        cells.append((0, nid(1, j), nid(1, j + 1), nid(1, j + 1)))  # center fan
    for k in range(1, rings):
        for j in range(sectors):
            cells.append((nid(k, j), nid(k + 1, j), nid(k + 1, j + 1), nid(k, j + 1)))

    # pull the template back to the original disk through the inverse map
    from .geometry import encode_point

    minv = recenter_map(z, Setting.ball(2)).inverse()
    shrink = 1.0 - 1e-12  # keep boundary nodes decodable
    enc = np.array([encode_point(p * shrink, Setting.ball(2)) for p in nodes])
    w = enc @ minv.matrix.T
    pullback = w[:, :-2] / (w[:, -1] - w[:, -2])[:, None]

    return StructuredMesh(
        nodes=nodes,
        quads=tuple(cells),
        pullback=pullback,
        rings=rings,
        sectors=sectors,
        spacing=1.0 / rings,
        viewpoint_poincare=result.viewpoint_poincare,
        min_size=h,
    )


def _cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def mesh_min_jacobian(mesh_obj: StructuredMesh, coords: str = "pullback") -> float:
    """Smallest corner Jacobian (cross product) over all cells; triangles are
    checked by their signed area."""
    pts = mesh_obj.pullback if coords == "pullback" else mesh_obj.nodes
    worst = math.inf
    for cell in mesh_obj.quads:
        a, b, c, d = (pts[i] for i in cell)
        if cell[2] == cell[3]:
            worst = min(worst, 0.5 * _cross2(b - a, c - a))
            continue
        corners = (a, b, c, d)
        for t in range(4):
            p0 = corners[t]
            p1 = corners[(t + 1) % 4]
            p3 = corners[(t - 1) % 4]
            worst = min(worst, _cross2(p1 - p0, p3 - p0))
    return worst


# ---------------------------------------------------------------------------
# Rendering


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _svg_circle(c, r, stroke="#1f2430", fill="none", width=0.004):
    return (
        f'<circle cx="{_fmt(c[0])}" cy="{_fmt(c[1])}" r="{_fmt(r)}" '
        f'stroke="{stroke}" fill="{fill}" stroke-width="{_fmt(width)}"/>'
    )


def _svg_dot(p, r=0.01, fill="#c2461f"):
    return f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="{_fmt(r)}" fill="{fill}"/>'


def _svg_segment(a, b, stroke="#3a6ea5", width=0.004):
    return (
        f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
        f'y2="{_fmt(b[1])}" stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
    )


def _svg_geodesic(u, v, stroke="#3a6ea5", width=0.004):
    """Poincare geodesic between two disk points: a circular arc orthogonal
    to the unit circle, or a diameter segment when collinear with the origin."""
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    cross = u[0] * v[1] - u[1] * v[0]
    if abs(cross) < 1e-9:
        return _svg_segment(u, v, stroke, width)
    # center satisfies 2 u.c = |u|^2 + 1 and 2 v.c = |v|^2 + 1
    a = np.array([[2 * u[0], 2 * u[1]], [2 * v[0], 2 * v[1]]])
    b = np.array([float(u @ u) + 1, float(v @ v) + 1])
    c = np.linalg.solve(a, b)
    r = math.sqrt(max(0.0, float(c @ c) - 1))
    sweep = 0 if cross > 0 else 1
    return (
        f'<path d="M {_fmt(u[0])} {_fmt(u[1])} A {_fmt(r)} {_fmt(r)} 0 0 '
        f'{sweep} {_fmt(v[0])} {_fmt(v[1])}" stroke="{stroke}" fill="none" '
        f'stroke-width="{_fmt(width)}"/>'
    )


def _stereographic_circle(pole, theta):
    """Project a cap boundary on S^2 from the north pole to a plane circle."""
    pole = np.asarray(pole, float)
    samples = []
    seed = np.array([1.0, 0, 0]) if abs(pole[0]) < 0.9 else np.array([0.0, 1, 0])
    u = np.cross(pole, seed)
    u /= np.linalg.norm(u)
    v = np.cross(pole, u)
    for t in (0.0, 2 * math.pi / 3, 4 * math.pi / 3):
        p = math.cos(theta) * pole + math.sin(theta) * (math.cos(t) * u + math.sin(t) * v)
        if p[2] > 1 - 1e-9:
            return None  # passes through the projection point
        samples.append(p[:2] / (1 - p[2]))
    (x1, y1), (x2, y2), (x3, y3) = samples
    a = np.array([[2 * (x2 - x1), 2 * (y2 - y1)], [2 * (x3 - x1), 2 * (y3 - y1)]])
    b = np.array([x2 ** 2 - x1 ** 2 + y2 ** 2 - y1 ** 2,
                  x3 ** 2 - x1 ** 2 + y3 ** 2 - y1 ** 2])
    try:
        c = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return None
    r = float(np.hypot(x1 - c[0], y1 - c[1]))
    return c, r


def render_svg(obj) -> str:
    """Deterministic SVG for two-dimensional scenes, results, packings, and
    meshes: unit disk centered in a 1000x1000 viewport."""
    body: list[str] = []
    if isinstance(obj, Packing):
        for c, r in zip(obj.planar_centers, obj.planar_radii):
            body.append(_svg_circle(c, float(r)))
    elif isinstance(obj, StructuredMesh):
        seen = set()
        for cell in obj.quads:
            k = len(set(cell))
            ids = cell[:k]
            for t in range(k):
                e = (min(ids[t], ids[(t + 1) % k]), max(ids[t], ids[(t + 1) % k]))
                if e not in seen:
                    seen.add(e)
                    body.append(_svg_segment(obj.pullback[e[0]], obj.pullback[e[1]]))
    elif isinstance(obj, (Scene, Result)):
        if isinstance(obj, Result):
            spheres = obj.transformed_spheres
            points = obj.transformed_points
            setting, dim = obj.setting, obj.dimension
            edges = ()
        else:
            spheres, points, edges = obj.spheres, obj.points, obj.edges
            setting, dim = obj.setting, obj.dimension
        if dim != 2:
            raise UnsupportedDimension("render_svg draws two-dimensional content only")
        if setting == "ball":
            for c, r in spheres:
                body.append(_svg_circle(c, r))
            for i, j in edges:
                body.append(_svg_geodesic(points[i], points[j]))
            for p in points:
                body.append(_svg_dot(p))
        else:
            for pole, theta in spheres:
                proj = _stereographic_circle(pole, theta)
                if proj is not None:
                    body.append(_svg_circle(*proj))
            for p in points:
                p = np.asarray(p, float)
                if p[2] < 1 - 1e-9:
                    body.append(_svg_dot(p[:2] / (1 - p[2])))
    else:
        raise TypeError(f"cannot render object of type {type(obj).__name__}")
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


# ---------------------------------------------------------------------------
# Viewer bundle


def export_viewer_bundle(scene: Scene, result: Result) -> dict:
    """Bundle a scene and its optimum for the static browser viewer."""
    objects = []
    for i, s in enumerate(scene.spheres):
        objects.append({"kind": "sphere", "index": i, "size": result.sizes[i]
                        if i < len(result.sizes) else None})
    return {
        "schema": SCHEMA_VERSION,
        "scene": scene.to_json(),
        "viewpoint": {
            "poincare": list(result.viewpoint_poincare),
            "klein": list(result.viewpoint_klein),
        },
        "objective_value": result.objective_value,
        "objective": result.objective,
        "objects": objects,
        "seed": result.seed,
    }


# ---------------------------------------------------------------------------
# Graph and packing files


def graph_from_json(data: dict) -> EmbeddedGraph:
    if "rotation" not in data:
        raise SceneValidationError("graph file needs a 'rotation' list")
    rotation = tuple(tuple(int(x) for x in nbrs) for nbrs in data["rotation"])
    if "vertices" in data and int(data["vertices"]) != len(rotation):
        raise SceneValidationError("vertex count does not match rotation system")
    return EmbeddedGraph(rotation)


def pack_to_json(packing: Packing, markers: frozenset[int] = frozenset()) -> dict:
    """Packing as a sphere-setting scene; augmentation circles are dropped
    from the scene spheres but kept alongside for reference."""
    caps = [cap_pole_radius(c) for c in packing.circles]
    keep = [i for i in range(len(caps)) if i not in markers]
    return {
        "schema": SCHEMA_VERSION,
        "dimension": 2,
        "setting": "sphere",
        "objective": "radius",
        "spheres": [
            {"pole": list(map(float, caps[i][0])), "theta": float(caps[i][1])}
            for i in keep
        ],
        "all_spheres": [
            {"pole": list(map(float, p)), "theta": float(t)} for p, t in caps
        ],
        "markers": sorted(markers),
        "tangencies": [list(e) for e in packing.tangencies],
        "residual": packing.residual,
        "planar": {
            "centers": [list(map(float, c)) for c in packing.planar_centers],
            "radii": [float(r) for r in packing.planar_radii],
        },
    }


def incident_edge_weights(positions, edges) -> list[float]:
    """Weight per vertex: mean length of its incident edges (flat-map use)."""
    positions = np.asarray(positions, float)
    sums = np.zeros(len(positions))
    counts = np.zeros(len(positions))
    for i, j in edges:
        length = float(np.linalg.norm(positions[i] - positions[j]))
        for v in (i, j):
            sums[v] += length
            counts[v] += 1
    if (counts == 0).any():
        raise SceneValidationError("every vertex needs at least one incident edge")
    return list(sums / counts)

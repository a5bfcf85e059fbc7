"""Coin-graph inputs: numerical circle packings of triangulations and the
face-augmentation construction for non-maximal planar graphs.

Graphs carry a rotation system (counterclockwise neighbor order per vertex);
faces come from the standard dart traversal where the dart after ``(u, v)``
is ``(v, w)`` with ``w`` the predecessor of ``u`` in the rotation at ``v``.
Packing uses the angle-sum radius iteration with a chosen outer face pinned
to three unit circles, tangency layout over a face-BFS, and an inverse
stereographic lift to caps on the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, NonPlanarInput
from .geometry import InversiveVector, Setting


@dataclass(frozen=True)
class EmbeddedGraph:
    """Connected planar embedding given by its rotation system."""

    rotation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rotation = tuple(tuple(int(x) for x in nbrs) for nbrs in self.rotation)
        object.__setattr__(self, "rotation", rotation)
        n = len(rotation)
        for v, nbrs in enumerate(rotation):
            if len(set(nbrs)) != len(nbrs):
                raise NonPlanarInput(f"vertex {v}: repeated neighbor (multi-edge)")
            for u in nbrs:
                if u == v:
                    raise NonPlanarInput(f"vertex {v}: self-loop")
                if not 0 <= u < n:
                    raise NonPlanarInput(f"vertex {v}: neighbor {u} out of range")
                if v not in rotation[u]:
                    raise NonPlanarInput(f"edge {v}-{u} is not symmetric")
        object.__setattr__(self, "faces", self._trace_faces())
        if not self._connected():
            raise NonPlanarInput("graph must be connected")
        if self.n_vertices - self.n_edges + self.n_faces != 2:
            raise NonPlanarInput(
                "rotation system fails the Euler check: not a planar embedding"
            )

    @property
    def n_vertices(self) -> int:
        return len(self.rotation)

    @property
    def n_edges(self) -> int:
        return sum(len(r) for r in self.rotation) // 2

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def edges(self) -> list[tuple[int, int]]:
        out = set()
        for v, nbrs in enumerate(self.rotation):
            for u in nbrs:
                out.add((min(u, v), max(u, v)))
        return sorted(out)

    def _next_dart(self, u: int, v: int) -> tuple[int, int]:
        nbrs = self.rotation[v]
        w = nbrs[(nbrs.index(u) - 1) % len(nbrs)]
        return v, w

    def _trace_faces(self) -> tuple[tuple[int, ...], ...]:
        seen = set()
        faces = []
        for v, nbrs in enumerate(self.rotation):
            for u in nbrs:
                dart = (v, u)
                if dart in seen:
                    continue
                face = []
                while dart not in seen:
                    seen.add(dart)
                    face.append(dart[0])
                    dart = self._next_dart(*dart)
                faces.append(tuple(face))
        return tuple(faces)

    def _connected(self) -> bool:
        if self.n_vertices == 0:
            return False
        stack = [0]
        seen = {0}
        while stack:
            v = stack.pop()
            for u in self.rotation[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n_vertices

    def is_maximal(self) -> bool:
        return all(len(f) == 3 for f in self.faces)


def augment(g: EmbeddedGraph) -> tuple[EmbeddedGraph, frozenset[int]]:
    """Add one vertex inside every face, connected to all its vertices.

    Returns the triangulated graph and the set of added vertex ids (so the
    corresponding circles can be deleted after packing).  Faces must be
    simple cycles (2-connected embeddings).
    """
    for face in g.faces:
        if len(face) != len(set(face)):
            raise NonPlanarInput(
                "augmentation needs simple faces (2-connected embedding)"
            )
    rotation = [list(nbrs) for nbrs in g.rotation]
    markers = []
    for face in g.faces:
        w = len(rotation)
        markers.append(w)
        k = len(face)
        for pos, v in enumerate(face):
            prev = face[(pos - 1) % k]
            at = rotation[v].index(prev)
            rotation[v].insert(at, w)
        rotation.append(list(face))
    return EmbeddedGraph(tuple(tuple(r) for r in rotation)), frozenset(markers)


@dataclass(frozen=True)
class Packing:
    """Tangent-circle realization of a maximal planar graph on the sphere."""

    circles: tuple[InversiveVector, ...]
    tangencies: tuple[tuple[int, int], ...]
    planar_centers: np.ndarray
    planar_radii: np.ndarray
    residual: float
    outer_face: tuple[int, int, int]


def _corner_angle(rv: float, ru: float, rw: float) -> float:
    """Angle at the r_v circle in a mutually tangent triple."""
    s = math.sqrt((ru / (rv + ru)) * (rw / (rv + rw)))
    return 2 * math.asin(min(1.0, s))


def _angle_sum(radii: np.ndarray, v: int, nbrs) -> float:
    k = len(nbrs)
    total = 0.0
    for t in range(k):
        total += _corner_angle(radii[v], radii[nbrs[t]], radii[nbrs[(t + 1) % k]])
    return total


def _solve_radii(g: EmbeddedGraph, interior, radii, tol=1e-13, max_sweeps=30000,
                 residual_log: list | None = None):
    """Collins-Stephenson uniform-neighbor sweeps for interior radii."""
    target = 2 * math.pi
    residual = math.inf
    for _ in range(max_sweeps):
        residual = 0.0
        for v in interior:
            nbrs = g.rotation[v]
            k = len(nbrs)
            theta = _angle_sum(radii, v, nbrs)
            residual = max(residual, abs(theta - target))
            # uniform-neighbor surrogate: radius that a uniform flower needs
            # to produce the same angle sum, then the radius making a uniform
            # flower close up exactly
            beta = math.sin(theta / (2 * k))
            delta = math.sin(target / (2 * k))
            rhat = radii[v] * beta / (1 - beta)
            radii[v] = rhat * (1 - delta) / delta
        if residual_log is not None:
            residual_log.append(residual)
        if residual < tol:
            return residual
    raise NonConvergence(
        f"packing radii did not converge (residual {residual:.3e})", residual=residual
    )


def _layout(g: EmbeddedGraph, radii: np.ndarray, outer) -> np.ndarray:
    a, b, c = outer
    n = g.n_vertices
    centers = np.full((n, 2), np.nan)
    centers[a] = (0.0, 0.0)
    centers[b] = (radii[a] + radii[b], 0.0)
    placed = {a, b}
    # faces adjacent to placed edges, outer face excluded; orientations from
    # the traversal are consistent, so the third vertex always sits on the
    # same side of the directed placed edge
    faces = [f for f in g.faces if f != tuple(outer)]
    pending = True
    while pending:
        pending = False
        for face in faces:
            ids = set(face)
            missing = [v for v in face if v not in placed]
            if len(missing) != 1 or not (ids - set(missing)) <= placed:
                continue
            r = missing[0]
            pos = face.index(r)
            p = face[(pos + 1) % 3]
            q = face[(pos + 2) % 3]
            centers[r] = _third_center(
                centers[p], centers[q], radii[p], radii[q], radii[r]
            )
            placed.add(r)
            pending = True
        if len(placed) == n:
            break
    if len(placed) != n:
        raise NonConvergence("layout could not place every circle")
    return centers


def _third_center(cp, cq, rp, rq, rr):
    """Center tangent to two placed circles, on the left of the edge p->q."""
    d = np.linalg.norm(cq - cp)
    la = rp + rr
    lb = rq + rr
    x = (d * d + la * la - lb * lb) / (2 * d)
    y2 = la * la - x * x
    y = math.sqrt(max(0.0, y2))
    u = (cq - cp) / d
    perp = np.array([-u[1], u[0]])
    return cp + x * u + y * perp


def _lift_to_sphere(center: np.ndarray, radius: float) -> InversiveVector:
    """Planar circle -> cap via inverse stereographic projection from the
    north pole; the circle's interior maps to the cap."""
    angles = (0.0, 2 * math.pi / 3, 4 * math.pi / 3)
    pts = []
    for t in angles:
        w = center + radius * np.array([math.cos(t), math.sin(t)])
        s = float(w @ w)
        pts.append(np.array([2 * w[0], 2 * w[1], s - 1]) / (s + 1))
    p0, p1, p2 = pts
    nrm = np.cross(p1 - p0, p2 - p0)
    nrm = nrm / np.linalg.norm(nrm)
    h = float(nrm @ p0)
    s = float(center @ center)
    lifted_center = np.array([2 * center[0], 2 * center[1], s - 1]) / (s + 1)
    if float(nrm @ lifted_center) < h:
        nrm, h = -nrm, -h
    theta = math.acos(max(-1.0, min(1.0, h)))
    return InversiveVector.from_cap(nrm, theta)


def pack(g: EmbeddedGraph, outer_face: tuple[int, int, int] | None = None,
         tol: float = 1e-13, max_sweeps: int = 30000) -> Packing:
    """Numerical coin representation of a maximal planar graph on the sphere.

    The outer face is pinned to three mutually tangent unit circles, interior
    radii come from angle-sum sweeps, centers from a tangency layout, and the
    plane is lifted to the sphere.  The choice of outer face only moves the
    packing by a Mobius transformation.
    """
    if not g.is_maximal():
        raise NonPlanarInput("pack expects a maximal planar graph (all faces triangles)")
    if g.n_vertices < 4:
        raise NonPlanarInput("pack needs at least 4 vertices")
    outer = tuple(outer_face) if outer_face is not None else g.faces[0]
    if tuple(sorted(outer)) not in {tuple(sorted(f)) for f in g.faces}:
        raise NonPlanarInput("outer_face is not a face of the graph")
    outer = next(f for f in g.faces if sorted(f) == sorted(outer))

    radii = np.full(g.n_vertices, 0.5)
    radii[list(outer)] = 1.0
    interior = [v for v in range(g.n_vertices) if v not in outer]
    residual = _solve_radii(g, interior, radii, tol=tol, max_sweeps=max_sweeps) if interior else 0.0
    centers = _layout(g, radii, outer)

    edges = g.edges()
    gaps = [
        abs(np.linalg.norm(centers[i] - centers[j]) - (radii[i] + radii[j]))
        for i, j in edges
    ]
    residual = max(residual, max(gaps))

    # recenter and shrink so the lifted caps stay numerically balanced
    mid = centers.mean(axis=0)
    scale = 1.0 / (2 * np.abs(np.linalg.norm(centers - mid, axis=1) + radii).max())
    centers = (centers - mid) * scale
    radii_s = radii * scale

    circles = tuple(
        _lift_to_sphere(centers[v], float(radii_s[v])) for v in range(g.n_vertices)
    )
    return Packing(
        circles=circles,
        tangencies=tuple(edges),
        planar_centers=centers,
        planar_radii=radii_s,
        residual=float(residual),
        outer_face=tuple(outer),
    )

"""Near-linear max-min point-separation machinery.

* ``delaunay_sphere``: spherical Delaunay candidate edges (d = 2) via the
  3-D convex hull; the edge set is Mobius-invariant and always contains the
  closest transformed pair.
* ``close_pairs``: fixed-radius near-neighbor listing by uniform grid
  hashing (arc metric on the sphere, Euclidean in the ball).
* ``maxmin_separation``: sample-verify loop: solve on a candidate edge set,
  list all pairs closer than the achieved minimum, add them, repeat.  At
  termination the subset optimum provably equals the complete-graph optimum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import DegenerateHull
from .geometry import Setting, recenter_map
from .objectives import ball_edge_term, make_instance, sphere_edge_term
from .solver import Solution, SolverConfig, minimize_max


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray
    setting: Setting

    def __post_init__(self):
        pts = np.asarray(self.points, float)
        if pts.ndim != 2 or pts.shape[1] != self.setting.n_spatial:
            raise ValueError(
                f"points must be (n, {self.setting.n_spatial}) for {self.setting}"
            )
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        nrm = np.linalg.norm(pts, axis=1)
        if self.setting.kind == "sphere":
            if np.abs(nrm - 1).max() > 1e-6:
                raise ValueError("sphere-setting points must lie on the unit sphere")
            pts = pts / nrm[:, None]
        else:
            if nrm.max() >= 1.0:
                raise ValueError("ball-setting points must lie strictly inside the ball")
        pts = np.array(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class CandidateGraph:
    edges: tuple[tuple[int, int], ...]
    provenance: str
    n_points: int

    def __post_init__(self):
        for i, j in self.edges:
            if i == j:
                raise ValueError("self-loop in candidate graph")
            if not (0 <= i < self.n_points and 0 <= j < self.n_points):
                raise ValueError("edge index out of range")


def delaunay_sphere(ps: PointSet) -> CandidateGraph:
    """Edges of the spherical Delaunay triangulation (3-D hull edges)."""
    if ps.setting != Setting.sphere(2):
        raise ValueError("delaunay_sphere expects points on S^2")
    if ps.n < 4:
        raise DegenerateHull("need at least 4 points")
    try:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(ps.points)
    except QhullError as exc:
        raise DegenerateHull(f"degenerate point set: {exc}") from exc
    if len(hull.vertices) != ps.n:
        # on the sphere every point is extreme; a missing one means a
        # numerically coincident pair
        raise DegenerateHull("coincident or degenerate points on the sphere")
    edges = set()
    for simplex in hull.simplices:
        k = len(simplex)
        for a in range(k):
            i, j = int(simplex[a]), int(simplex[(a + 1) % k])
            edges.add((min(i, j), max(i, j)))
    return CandidateGraph(tuple(sorted(edges)), "delaunay", ps.n)


def close_pairs(points: np.ndarray, delta: float, setting: Setting) -> list[tuple[int, int]]:
    """All unordered pairs at distance < delta (arc length on the sphere,
    Euclidean otherwise), via uniform grid hashing."""
    pts = np.asarray(points, float)
    n = len(pts)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if setting.kind == "sphere":
        if delta > math.pi:
            return [(i, j) for i in range(n) for j in range(i + 1, n)]
        thr = 2 * math.sin(delta / 2)
    else:
        thr = delta
    if thr <= 0:
        return []
    k = pts.shape[1]
    cells: dict[tuple, list[int]] = {}
    keys = np.floor(pts / thr).astype(np.int64)
    for idx, key in enumerate(map(tuple, keys)):
        cells.setdefault(key, []).append(idx)
    offsets = list(itertools.product((-1, 0, 1), repeat=k))
    thr2 = thr * thr
    out = []
    for key, members in cells.items():
        for off in offsets:
            nb = tuple(key[t] + off[t] for t in range(k))
            if nb < key:
                continue  # each unordered cell pair once
            other = cells.get(nb)
            if other is None:
                continue
            if nb == key:
                for a in range(len(members)):
                    i = members[a]
                    for b in range(a + 1, len(members)):
                        j = members[b]
                        d = pts[i] - pts[j]
                        if float(d @ d) < thr2:
                            out.append((min(i, j), max(i, j)))
            else:
                for i in members:
                    for j in other:
                        d = pts[i] - pts[j]
                        if float(d @ d) < thr2:
                            out.append((min(i, j), max(i, j)))
    return sorted(out)


@dataclass(frozen=True)
class SeparationResult:
    solution: Solution
    graph: CandidateGraph
    rounds: int


def _transform_points(pts: np.ndarray, x_klein: np.ndarray, setting: Setting) -> np.ndarray:
    from .geometry import encode_point, klein_to_poincare

    m = recenter_map(klein_to_poincare(x_klein), setting)
    enc = np.array([encode_point(p, setting) for p in pts])
    w = enc @ m.matrix.T
    if setting.kind == "ball":
        return w[:, :-2] / (w[:, -1] - w[:, -2])[:, None]
    return w[:, :-1] / w[:, -1][:, None]


def _pair_distances(pts: np.ndarray, pairs, setting: Setting) -> np.ndarray:
    pairs = np.asarray(list(pairs), int)
    a = pts[pairs[:, 0]]
    b = pts[pairs[:, 1]]
    if setting.kind == "sphere":
        return np.arccos(np.clip(np.einsum("ij,ij->i", a, b), -1.0, 1.0))
    return np.linalg.norm(a - b, axis=1)


def _planar_delaunay_edges(pts: np.ndarray) -> set[tuple[int, int]]:
    try:
        tri = Delaunay(pts)
    except QhullError:
        return set()
    edges = set()
    for simplex in tri.simplices:
        for a in range(3):
            i, j = int(simplex[a]), int(simplex[(a + 1) % 3])
            edges.add((min(i, j), max(i, j)))
    return edges


def maxmin_separation(ps: PointSet, config: SolverConfig = SolverConfig(),
                      pairs_per_round: int = 3, max_rounds: int = 32,
                      extra_terms=()) -> SeparationResult:
    """Maximize the minimum pairwise distance over all Mobius transformations,
    equivalent to solving the complete graph but with near-linear work.

    Each round solves the candidate set (seeded with Delaunay edges when
    available, plus random pairs), then verifies by listing every pair closer
    than the achieved minimum; verification guarantees the final answer
    matches the complete graph exactly.
    """
    pts = ps.points
    n = ps.n
    if n < 2:
        raise ValueError("need at least two points")
    rng = np.random.default_rng(config.rng_seed)
    make_term = sphere_edge_term if ps.setting.kind == "sphere" else ball_edge_term

    candidates: set[tuple[int, int]] = set()
    if ps.setting == Setting.sphere(2) and n >= 4:
        try:
            candidates |= set(delaunay_sphere(ps).edges)
        except DegenerateHull:
            pass
    if ps.setting == Setting.ball(2) and n >= 4:
        candidates |= _planar_delaunay_edges(pts)
    if n == 2:
        candidates = {(0, 1)}

    all_pairs = n * (n - 1) // 2
    for rounds in range(1, max_rounds + 1):
        wanted = min(pairs_per_round * n, all_pairs)
        sampled = set()
        guard = 0
        while len(sampled) < wanted and guard < 20 * wanted:
            i, j = rng.integers(0, n, 2)
            guard += 1
            if i != j:
                sampled.add((min(i, j), max(i, j)))
        edge_list = sorted(candidates | sampled)
        terms = [make_term(pts[i], pts[j]) for i, j in edge_list]
        inst = make_instance(terms + list(extra_terms))
        sol = minimize_max(inst, config)
        x = sol.x_star.coords
        tpts = _transform_points(pts, x, ps.setting)
        delta = float(_pair_distances(tpts, edge_list, ps.setting).min())
        close = set(close_pairs(tpts, delta, ps.setting))
        missing = close - set(edge_list)
        if not missing:
            graph = CandidateGraph(tuple(edge_list), "verified", n)
            return SeparationResult(sol, graph, rounds)
        candidates |= set(edge_list) | close
        if ps.setting == Setting.ball(2) and n >= 4:
            candidates |= _planar_delaunay_edges(tpts)
    raise RuntimeError(f"verification loop did not terminate in {max_rounds} rounds")

"""Random scene/instance generators and shared helpers for the test suite."""

from __future__ import annotations

import math

import numpy as np

from mobius_opt.geometry import (
    InversiveVector,
    MobiusMap,
    Setting,
    poincare_to_klein,
    recenter_map,
)
from mobius_opt.objectives import (
    ball_edge_term,
    ball_sphere_radius_term,
    cap_radius_term,
    klein_disk_size_term,
    make_instance,
    point_size_term,
    sphere_edge_term,
)


def ball_points(rng, n, dim=2, rmax=0.9):
    dirs = rng.standard_normal((n, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rmax * rng.uniform(0, 1, (n, 1)) ** (1.0 / dim)
    return dirs * radii


def sphere_points(rng, n, dim=2):
    p = rng.standard_normal((n, dim + 1))
    return p / np.linalg.norm(p, axis=1, keepdims=True)


def random_spheres_in_ball(rng, n, dim=2):
    centers = ball_points(rng, n, dim, rmax=0.8)
    gap = 1 - np.linalg.norm(centers, axis=1)
    radii = gap * rng.uniform(0.1, 0.9, n)
    return [InversiveVector.from_center_radius(c, float(r)) for c, r in zip(centers, radii)]


def random_caps(rng, n, dim=2):
    poles = sphere_points(rng, n, dim)
    thetas = rng.uniform(0.05, 2.6, n)
    return [InversiveVector.from_cap(p, float(t)) for p, t in zip(poles, thetas)]


def random_edge_pairs(rng, n_points, n_edges):
    """Distinct unordered index pairs, at least a spanning-ish sample."""
    limit = n_points * (n_points - 1) // 2
    if n_edges > limit:
        raise ValueError(f"cannot draw {n_edges} distinct pairs from {n_points} points")
    pairs = set()
    while len(pairs) < n_edges:
        i, j = rng.integers(0, n_points, 2)
        if i != j:
            pairs.add((min(i, j), max(i, j)))
    return sorted(pairs)


def random_instance(rng, family, n=10, dim=2):
    """Random solver instance for one term family; returns (instance, terms)."""
    if family == "ball_radius":
        terms = [ball_sphere_radius_term(s) for s in random_spheres_in_ball(rng, n, dim)]
    elif family == "cap_radius":
        terms = [cap_radius_term(s) for s in random_caps(rng, n, dim)]
    elif family == "sphere_arc":
        pts = sphere_points(rng, max(4, n // 2 + 2), dim)
        terms = [sphere_edge_term(pts[i], pts[j])
                 for i, j in random_edge_pairs(rng, len(pts), n)]
    elif family == "ball_edge":
        pts = ball_points(rng, max(4, n // 2 + 2), dim)
        terms = [ball_edge_term(pts[i], pts[j])
                 for i, j in random_edge_pairs(rng, len(pts), n)]
    elif family == "point_size":
        pts = ball_points(rng, n, dim)
        sizes = rng.uniform(0.2, 5.0, n)
        terms = [point_size_term(p, float(s)) for p, s in zip(pts, sizes)]
    elif family in ("klein_diameter", "klein_width"):
        measure = "diameter" if family == "klein_diameter" else "width"
        terms = [klein_disk_size_term(s, measure)
                 for s in random_spheres_in_ball(rng, n, dim)]
    else:
        raise ValueError(family)
    return make_instance(terms), terms


def random_mobius(rng, setting: Setting, max_norm=0.7) -> MobiusMap:
    """Random ball-preserving map: rotation composed with a boost."""
    k = setting.n_spatial
    q, _ = np.linalg.qr(rng.standard_normal((k, k)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    a = ball_points(rng, 1, k, rmax=max_norm)[0]
    return MobiusMap.rotation(q, setting) @ recenter_map(a, setting)


def random_klein_segment(rng, dim, rmax=0.93):
    a = ball_points(rng, 1, dim, rmax)[0]
    b = ball_points(rng, 1, dim, rmax)[0]
    return a, b


def quasiconvexity_trials(rng, family, trials, dim=2, tol=1e-9):
    """Midpoint quasiconvexity check; returns number of violations."""
    bad = 0
    for _ in range(trials):
        inst, terms = random_instance(rng, family, n=1, dim=dim)
        f = terms[0].term.evaluate
        a, b = random_klein_segment(rng, inst.dimension)
        mid = (a + b) / 2
        if f(mid) > max(f(a), f(b)) + tol:
            bad += 1
    return bad


def klein_of_poincare(p) -> np.ndarray:
    return poincare_to_klein(np.asarray(p, float)).coords

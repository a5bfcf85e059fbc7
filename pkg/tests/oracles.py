"""Independent oracles used to derive expected values.

Everything here is implemented from first principles (explicit Mobius
formulas, sampling, grids, brute force) and deliberately avoids the
Lorentz-matrix code paths of the package under test.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from mobius_opt.solver import evaluate_max_many


def phi_ball(a, x):
    """Explicit unit-ball Mobius translation taking ``a`` to the origin."""
    a = np.asarray(a, float)
    x = np.asarray(x, float)
    xa = x - a
    den = 1 - 2 * float(a @ x) + float(a @ a) * float(x @ x)
    return ((1 - float(a @ a)) * xa - float(xa @ xa) * a) / den


def fd_conformal(a, x, h=1e-5):
    """Finite-difference length scaling of phi_ball at x (isotropic)."""
    a = np.asarray(a, float)
    x = np.asarray(x, float)
    d = len(x)
    cols = []
    for j in range(d):
        e = np.zeros(d)
        e[j] = h
        cols.append((phi_ball(a, x + e) - phi_ball(a, x - e)) / (2 * h))
    jac = np.column_stack(cols)
    sv = np.linalg.svd(jac, compute_uv=False)
    return float(sv.mean())


def fit_circle(points):
    """Least-squares circle through planar points: returns (center, radius)."""
    pts = np.asarray(points, float)
    a = np.column_stack([2 * pts, np.ones(len(pts))])
    b = (pts ** 2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    center = sol[:-1]
    radius = math.sqrt(max(0.0, sol[-1] + float(center @ center)))
    return center, radius


def fit_cap(points, reference_pole=None):
    """Fit (pole, theta) of the spherical cap whose boundary passes through
    the given points on the unit sphere (plane fit via SVD).  A boundary
    circle bounds two caps; ``reference_pole`` picks the side, otherwise the
    smaller cap is returned."""
    pts = np.asarray(points, float)
    centroid = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centroid)
    n = vt[-1]
    h = float((pts @ n).mean())
    if reference_pole is not None:
        if float(n @ np.asarray(reference_pole, float)) < 0:
            n, h = -n, -h
    elif h < 0:
        n, h = -n, -h
    h = min(1.0, max(-1.0, h))
    return n, math.acos(h)


def sphere_boundary_points(center, radius, k=16):
    """k points on a planar circle."""
    t = np.linspace(0, 2 * math.pi, k, endpoint=False)
    return np.asarray(center, float) + radius * np.column_stack([np.cos(t), np.sin(t)])


def cap_boundary_points(pole, theta, k=16):
    """k points on the boundary circle of a cap on S^2."""
    pole = np.asarray(pole, float)
    pole = pole / np.linalg.norm(pole)
    # orthonormal frame around the pole
    seed = np.array([1.0, 0.0, 0.0]) if abs(pole[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(pole, seed)
    u /= np.linalg.norm(u)
    v = np.cross(pole, u)
    t = np.linspace(0, 2 * math.pi, k, endpoint=False)
    return (math.cos(theta) * pole[None, :]
            + math.sin(theta) * (np.outer(np.cos(t), u) + np.outer(np.sin(t), v)))


def stereographic(p):
    """S^2 -> plane from the north pole (0,0,1)."""
    p = np.asarray(p, float)
    return p[:2] / (1 - p[2])


def inverse_stereographic(w):
    w = np.asarray(w, float)
    s = float(w @ w)
    return np.array([2 * w[0], 2 * w[1], s - 1]) / (s + 1)


def boost_toward_north_oracle(p, rapidity):
    """Mobius boost of S^2 along the north-pole axis, computed by
    conjugating a planar scaling with stereographic projection."""
    return inverse_stereographic(math.exp(rapidity) * stereographic(p))


def grid_minimize(instance, res=400, refine_rounds=60, refine_res=25):
    """Klein-grid search plus multiscale local refinement (2-D domains).

    The local stage re-centers a shrinking grid on the running best; the
    slow shrink rate lets it track curved valleys where two terms tie.
    """
    r = 1.0 - instance.domain_shrink
    xs = np.linspace(-r, r, res)
    gx, gy = np.meshgrid(xs, xs)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    pts = pts[(pts ** 2).sum(axis=1) < r * r]
    vals = evaluate_max_many(instance, pts)
    j = int(np.argmin(vals))
    best, best_val = pts[j], float(vals[j])
    span = 2 * r / (res - 1)
    offs = np.linspace(-1, 1, refine_res)
    ox, oy = np.meshgrid(offs, offs)
    stencil = np.column_stack([ox.ravel(), oy.ravel()])
    for _ in range(refine_rounds):
        local = best + span * stencil
        nrm = np.linalg.norm(local, axis=1)
        local[nrm >= r] *= (r - 1e-12) / nrm[nrm >= r, None]
        vals = evaluate_max_many(instance, local)
        j = int(np.argmin(vals))
        moved = False
        if vals[j] < best_val:
            moved = np.linalg.norm(local[j] - best) > 0.55 * span
            best, best_val = local[j], float(vals[j])
        if not moved:
            span *= 0.5  # shrink only once the walk stops leaving the window
    return best_val, best


def brute_close_pairs(points, delta, arc=False):
    """Quadratic scan for pairs closer than delta (arc metric on the sphere
    when ``arc``)."""
    pts = np.asarray(points, float)
    out = set()
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if arc:
                c = float(np.clip(pts[i] @ pts[j], -1.0, 1.0))
                dist = math.acos(c)
            else:
                dist = float(np.linalg.norm(pts[i] - pts[j]))
            if dist < delta:
                out.add((i, j))
    return out


def brute_hull_edges(points):
    """Edges of the 3-D convex hull by testing supporting planes of all
    triples (O(n^4); small inputs only)."""
    pts = np.asarray(points, float)
    n = len(pts)
    edges = set()
    for i, j, k in itertools.combinations(range(n), 3):
        nrm = np.cross(pts[j] - pts[i], pts[k] - pts[i])
        if np.linalg.norm(nrm) < 1e-12:
            continue
        side = (pts - pts[i]) @ nrm
        others = np.delete(side, [i, j, k])
        if (others <= 1e-10).all() or (others >= -1e-10).all():
            edges.update({tuple(sorted(e)) for e in [(i, j), (j, k), (i, k)]})
    return edges

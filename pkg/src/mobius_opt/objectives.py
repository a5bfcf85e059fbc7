"""Quasiconvex term families mapping viewpoints to (negated) object sizes.

Each constructor returns a :class:`SizeTerm` whose ``term.evaluate`` is the
negated size (the solver minimizes, the problems maximize a minimum), and
whose level sets are convex in Klein coordinates:

* ``ball_sphere_radius_term``: Euclidean radius of a transformed sphere in
  the unit ball (concentric-ball level sets, horospheres included).
* ``cap_radius_term``: spherical radius of a transformed cap's boundary
  circle on S^d (lens-shaped level sets around the cap's hyperplane).
* ``sphere_edge_term``: arc length between transformed endpoints on S^d
  (banana-shaped level sets around the ideal line).
* ``ball_edge_term``: Euclidean distance between transformed points in the
  unit ball.
* ``point_size_term``: weighted conformal scale factor at a marked
  point (infinitesimal-radius limit of the sphere case).
* ``klein_disk_size_term``: diameter (major axis) or width (minor axis)
  of the Klein-model ellipse image of a hyperbolic disk.
* ``orientation_barrier_term``: constant family: a hyperbolic halfspace
  keeping a face triple's orientation fixed.

All sizes are evaluated algebraically from Lorentz vectors, so one matrix
pairing per viewpoint serves every family; ``make_instance`` groups terms of
one family into vectorized batches for the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateEdge, DegenerateFace, GeometryError, NonBallImage
from .geometry import (
    InversiveVector,
    Setting,
    encode_point,
    lorentz_inner,
    sphere_through_points,
)
from .solver import BARRIER, Instance, ObjectiveTerm

_BOUNDARY_SLACK = 1e-9  # tangency tolerance for "inside the unit ball"


def _metric_signs(setting: Setting) -> np.ndarray:
    j = np.ones(setting.vector_length)
    j[-1] = -1.0
    return j


def _zhat(xs: np.ndarray, setting: Setting) -> np.ndarray:
    """Hyperboloid vectors of Klein viewpoints, extra coordinate zero."""
    xs = np.atleast_2d(np.asarray(xs, float))
    s2 = np.einsum("ij,ij->i", xs, xs)
    s2 = np.minimum(s2, 1.0 - 1e-14)
    sc = 1.0 / np.sqrt(1.0 - s2)
    z = np.zeros((xs.shape[0], setting.vector_length))
    z[:, : setting.n_spatial] = xs * sc[:, None]
    z[:, -1] = sc
    return z


@dataclass(frozen=True)
class _Batch:
    """Vectorized evaluator for one family; also serves single terms."""

    family: str
    setting: Setting
    indices: np.ndarray
    data: dict

    def values(self, xs: np.ndarray) -> np.ndarray:
        z = _zhat(xs, self.setting)
        d = self.data
        fam = self.family
        if fam == "ball_radius":
            # value = -radius/w = -1/((wt - ve) * w), fused in place
            out = -(z @ d["vj"].T)
            out -= d["ve"][None, :]
            out *= d["w"][None, :]
            np.reciprocal(out, out=out)
            np.negative(out, out=out)
            return out
        if fam in ("klein_diameter", "klein_width"):
            wt = -(z @ d["vj"].T)
            radius = 1.0 / (wt - d["ve"][None, :])
            c2 = radius * radius
            c2 *= 1.0 + wt * wt - d["ve"][None, :] ** 2
            np.maximum(c2, 0.0, out=c2)
            x0 = np.sqrt(c2)
            if fam == "klein_width":
                hi = x0 + radius
                lo = x0 - radius
                size = 2 * hi / (1 + hi * hi) - 2 * lo / (1 + lo * lo)
            else:
                dd = 1.0 + c2 + radius * radius
                dd *= dd
                dd -= 4 * c2 * radius * radius
                size = 4 * radius / np.sqrt(dd)
            size /= d["w"][None, :]
            np.negative(size, out=size)
            return size
        if fam == "cap_radius":
            # Spherical radius of the boundary circle: symmetric in the cap
            # side (min(theta, pi - theta)), which keeps the level sets
            # lens-shaped; the raw cap angle loses quasiconvexity once a
            # transformed cap covers more than a hemisphere.
            wt = z @ d["vj"].T
            np.abs(wt, out=wt)
            out = np.arctan2(1.0, wt)
            out /= d["w"][None, :]
            np.negative(out, out=out)
            return out
        if fam == "sphere_arc":
            q = -(z @ d["pj"].T)
            ca = q[:, d["iu"]]
            ca *= q[:, d["iv"]]
            np.reciprocal(ca, out=ca)
            ca *= d["cg1"][None, :]
            ca += 1.0
            np.clip(ca, -1.0, 1.0, out=ca)
            np.arccos(ca, out=ca)
            np.negative(ca, out=ca)
            return ca
        if fam == "ball_edge":
            lam = -(z @ d["pj"].T)
            lam -= d["pe"][None, :]
            np.reciprocal(lam, out=lam)
            out = lam[:, d["iu"]]
            out *= lam[:, d["iv"]]
            np.sqrt(out, out=out)
            out *= d["chord"][None, :]
            np.negative(out, out=out)
            return out
        if fam == "point_size":
            out = -(z @ d["pj"].T)
            out -= d["pe"][None, :]
            np.reciprocal(out, out=out)
            out *= d["s"][None, :]
            np.negative(out, out=out)
            return out
        if fam == "orientation_barrier":
            side = z @ d["cj"].T
            return np.where(side >= -1e-12, -BARRIER, BARRIER)
        raise AssertionError(f"unknown family {fam}")

    def take(self, sel: np.ndarray, new_indices: np.ndarray) -> "_Batch":
        d = self.data
        if self.family in ("ball_radius", "cap_radius", "klein_diameter", "klein_width"):
            nd = {"vj": d["vj"][sel], "ve": d["ve"][sel], "w": d["w"][sel]}
        elif self.family == "sphere_arc":
            nd = {"pj": d["pj"], "iu": d["iu"][sel], "iv": d["iv"][sel], "cg1": d["cg1"][sel]}
        elif self.family == "ball_edge":
            nd = {"pj": d["pj"], "pe": d["pe"], "iu": d["iu"][sel], "iv": d["iv"][sel],
                  "chord": d["chord"][sel]}
        elif self.family == "point_size":
            nd = {"pj": d["pj"][sel], "pe": d["pe"][sel], "s": d["s"][sel]}
        elif self.family == "orientation_barrier":
            nd = {"cj": d["cj"][sel]}
        else:
            raise AssertionError(self.family)
        return _Batch(self.family, self.setting, np.asarray(new_indices, int), nd)


def _concat(batches: list[_Batch]) -> _Batch:
    fam = batches[0].family
    setting = batches[0].setting
    idx = np.concatenate([b.indices for b in batches])
    keys = batches[0].data.keys()
    if fam in ("sphere_arc", "ball_edge"):
        # Edge batches share a point table; concatenate with index offsets.
        pj = np.vstack([b.data["pj"] for b in batches])
        offs = np.cumsum([0] + [b.data["pj"].shape[0] for b in batches[:-1]])
        data = {"pj": pj}
        for key in ("iu", "iv"):
            data[key] = np.concatenate(
                [b.data[key] + off for b, off in zip(batches, offs)]
            )
        for key in keys - {"pj", "iu", "iv", "pe"}:
            data[key] = np.concatenate([b.data[key] for b in batches])
        if fam == "ball_edge":
            data["pe"] = np.concatenate([b.data["pe"] for b in batches])
    else:
        data = {k: np.concatenate([b.data[k] for b in batches]) for k in keys}
    return _Batch(fam, setting, idx, data)


@dataclass(frozen=True)
class SizeTerm:
    """A solver term together with its positive size function and family tag."""

    term: ObjectiveTerm
    natural_size: Callable[[np.ndarray], float] | None
    family: str
    setting: Setting
    weight: float = 1.0
    batch: _Batch = None

    @property
    def klein_dim(self) -> int:
        return self.setting.klein_dim


def _wrap(batch: _Batch, family: str, setting: Setting, weight: float = 1.0,
          source=None) -> SizeTerm:
    def evaluate(x, _b=batch):
        return float(_b.values(np.asarray(x, float)[None, :])[0, 0])

    if family == "orientation_barrier":
        natural = None
    else:
        def natural(x, _e=evaluate, _w=weight):
            return -_e(x) * _w

    term = ObjectiveTerm(evaluate, kind=family, source=source)
    return SizeTerm(term, natural, family, setting, weight, batch)


def _require_inside_ball(s: InversiveVector) -> None:
    # Inversive product with the unit sphere is >= 1 exactly when the sphere
    # is contained in the closed unit ball (= 1: horosphere tangency).
    ip = -float(s.coords[-2])
    w = float(s.coords[-1] - s.coords[-2])
    if ip < 1.0 - _BOUNDARY_SLACK or w <= 0:
        raise NonBallImage(
            "input sphere is not contained in the unit ball (modeled radius "
            "level sets would be nonconvex)"
        )


def ball_sphere_radius_term(s: InversiveVector, weight: float = 1.0,
                            source=None) -> SizeTerm:
    """Euclidean radius of the recentered sphere, divided by ``weight``."""
    if s.setting.kind != "ball":
        raise GeometryError("ball_sphere_radius_term needs a ball-setting sphere")
    if weight <= 0:
        raise ValueError("weight must be positive")
    _require_inside_ball(s)
    j = _metric_signs(s.setting)
    data = {
        "vj": (s.coords * j)[None, :],
        "ve": np.array([s.coords[-2]]),
        "w": np.array([float(weight)]),
    }
    batch = _Batch("ball_radius", s.setting, np.array([0]), data)
    return _wrap(batch, "ball_radius", s.setting, weight, source)


def cap_radius_term(s: InversiveVector, weight: float = 1.0, source=None) -> SizeTerm:
    """Spherical radius of the recentered cap's boundary circle, divided by
    ``weight``.  The radius is measured from the nearer center, so it equals
    the cap angle whenever the transformed cap is at most a hemisphere."""
    if s.setting.kind != "sphere":
        raise GeometryError("cap_radius_term needs a sphere-setting cap")
    if weight <= 0:
        raise ValueError("weight must be positive")
    j = _metric_signs(s.setting)
    data = {
        "vj": (s.coords * j)[None, :],
        "ve": np.zeros(1),
        "w": np.array([float(weight)]),
    }
    batch = _Batch("cap_radius", s.setting, np.array([0]), data)
    return _wrap(batch, "cap_radius", s.setting, weight, source)


def sphere_edge_term(u, v, dim: int | None = None, source=None) -> SizeTerm:
    """Arc length between the transformed endpoints of an edge on S^d."""
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    if np.linalg.norm(u - v) < 1e-12:
        raise DegenerateEdge("edge endpoints coincide")
    setting = Setting.sphere(dim or len(u) - 1)
    j = _metric_signs(setting)
    pts = np.vstack([encode_point(u, setting), encode_point(v, setting)])
    data = {
        "pj": pts * j[None, :],
        "iu": np.array([0]),
        "iv": np.array([1]),
        "cg1": np.array([float(u @ v) - 1.0]),
    }
    batch = _Batch("sphere_arc", setting, np.array([0]), data)
    return _wrap(batch, "sphere_arc", setting, 1.0, source)


def ball_edge_term(u, v, dim: int | None = None, source=None) -> SizeTerm:
    """Euclidean distance between the transformed endpoints in the unit ball."""
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    for p in (u, v):
        if float(p @ p) >= 1.0:
            raise GeometryError("edge endpoints must lie strictly inside the unit ball")
    chord = float(np.linalg.norm(u - v))
    if chord < 1e-12:
        raise DegenerateEdge("edge endpoints coincide")
    setting = Setting.ball(dim or len(u))
    j = _metric_signs(setting)
    pts = np.vstack([encode_point(u, setting), encode_point(v, setting)])
    data = {
        "pj": pts * j[None, :],
        "pe": pts[:, -2].copy(),
        "iu": np.array([0]),
        "iv": np.array([1]),
        "chord": np.array([chord]),
    }
    batch = _Batch("ball_edge", setting, np.array([0]), data)
    return _wrap(batch, "ball_edge", setting, 1.0, source)


def point_size_term(p, s: float = 1.0, dim: int | None = None, source=None) -> SizeTerm:
    """Weighted conformal factor at a marked point: s * |f'(p)|."""
    p = np.asarray(p, float)
    if float(p @ p) >= 1.0:
        raise GeometryError("marked point must lie strictly inside the unit ball")
    if s <= 0:
        raise ValueError("size weight must be positive")
    setting = Setting.ball(dim or len(p))
    j = _metric_signs(setting)
    enc = encode_point(p, setting)
    data = {
        "pj": (enc * j)[None, :],
        "pe": np.array([enc[-2]]),
        "s": np.array([float(s)]),
    }
    batch = _Batch("point_size", setting, np.array([0]), data)
    return _wrap(batch, "point_size", setting, 1.0, source)


def klein_disk_size_term(s: InversiveVector, measure: str = "diameter",
                         weight: float = 1.0, source=None) -> SizeTerm:
    """Major-axis (diameter) or minor-axis (width) extent of the Klein-model
    ellipse image of a hyperbolic disk, after recentering."""
    if s.setting.kind != "ball":
        raise GeometryError("klein_disk_size_term needs a ball-setting sphere")
    if measure not in ("diameter", "width"):
        raise ValueError("measure must be 'diameter' or 'width'")
    if weight <= 0:
        raise ValueError("weight must be positive")
    _require_inside_ball(s)
    family = "klein_diameter" if measure == "diameter" else "klein_width"
    j = _metric_signs(s.setting)
    data = {
        "vj": (s.coords * j)[None, :],
        "ve": np.array([s.coords[-2]]),
        "w": np.array([float(weight)]),
    }
    batch = _Batch(family, s.setting, np.array([0]), data)
    return _wrap(batch, family, s.setting, weight, source)


def orientation_barrier_term(u, v, w, setting: Setting,
                             reference_viewpoint=None, source=None) -> SizeTerm:
    """Constant family: -BARRIER on the closed hyperbolic halfspace (bounded
    by the hyperplane through u, v, w) containing the reference viewpoint,
    +BARRIER outside."""
    pts = [np.asarray(q, float) for q in (u, v, w)]
    for a in range(3):
        for b in range(a + 1, 3):
            if np.linalg.norm(pts[a] - pts[b]) < 1e-12:
                raise DegenerateFace("face vertices coincide")
    try:
        c = sphere_through_points(pts, setting,
                                  orthogonal_to_unit=(setting.kind == "ball"))
    except GeometryError as exc:
        raise DegenerateFace(str(exc)) from exc
    if reference_viewpoint is None:
        ref = np.zeros(setting.n_spatial)
    else:
        ref = np.asarray(reference_viewpoint, float)
    zref = _zhat(ref[None, :], setting)[0]
    side = lorentz_inner(zref, c)
    if abs(side) < 1e-12:
        raise DegenerateFace("reference viewpoint lies on the face hyperplane")
    sigma = math.copysign(1.0, side)
    j = _metric_signs(setting)
    data = {"cj": (c * j * sigma)[None, :]}
    batch = _Batch("orientation_barrier", setting, np.array([0]), data)
    return _wrap(batch, "orientation_barrier", setting, 1.0, source)


def make_instance(size_terms: Sequence[SizeTerm],
                  domain_shrink: float = 1e-7) -> Instance:
    """Bundle size terms into a solver instance with vectorized batches."""
    size_terms = list(size_terms)
    if not size_terms:
        raise ValueError("need at least one term")
    dim = size_terms[0].klein_dim
    for st in size_terms:
        if st.klein_dim != dim:
            raise ValueError("terms mix viewpoint dimensions")
    groups: dict[tuple, list[_Batch]] = {}
    for i, st in enumerate(size_terms):
        b = st.batch.take(np.array([0]), np.array([i]))
        groups.setdefault((st.family, st.setting), []).append(b)
    batches = tuple(_concat(bs) for bs in groups.values())
    return Instance(
        tuple(st.term for st in size_terms),
        dim,
        domain_shrink,
        batches,
    )

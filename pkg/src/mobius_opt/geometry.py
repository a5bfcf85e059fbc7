"""Lorentz-space (inversive-coordinate) engine for spheres, caps, points and
Mobius maps, plus Poincare/Klein hyperbolic model conversions.

Coordinate convention (fixed here, arbitrary in principle):

* Ball setting, dimension d: vectors live in R^{d+2} with d spatial
  coordinates, one extra spacelike coordinate at index d, and the timelike
  coordinate last.  A sphere with center c and radius r encodes as
  ``(c/r, (|c|^2 - r^2 - 1)/(2r), (|c|^2 - r^2 + 1)/(2r))``; a point p as
  ``(p, (|p|^2 - 1)/2, (|p|^2 + 1)/2)``.  The unit sphere is ``-e_d``.
* Sphere setting, dimension d: vectors live in R^{d+2} with d+1 spatial
  coordinates and the timelike coordinate last.  A cap with unit pole n and
  angular radius theta encodes as ``(n/sin theta, cot theta)``; a point n
  as ``(n, 1)``.

The quadratic form is ``Q(v) = sum(spacelike^2) - timelike^2``: +1 for
spheres and caps, 0 for points.  Mobius transformations act linearly as
orthochronous Lorentz matrices; unit-ball-preserving maps additionally fix
the unit-sphere vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, NonBallImage, PointAtInfinity

NORM_TOL = 1e-9


def _frozen_array(x) -> np.ndarray:
    a = np.array(x, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Setting:
    """Which Mobius geometry a vector or map belongs to.

    ``kind`` is ``"ball"`` (spheres inside the unit ball of E^d, viewpoints
    in H^d) or ``"sphere"`` (caps on S^d, viewpoints in H^{d+1}).
    """

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in ("ball", "sphere"):
            raise ValueError(f"unknown setting kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    @staticmethod
    def ball(dim: int) -> "Setting":
        return Setting("ball", dim)

    @staticmethod
    def sphere(dim: int) -> "Setting":
        return Setting("sphere", dim)

    @property
    def vector_length(self) -> int:
        return self.dim + 2

    @property
    def n_spatial(self) -> int:
        """Number of point coordinates (= viewpoint dimension)."""
        return self.dim if self.kind == "ball" else self.dim + 1

    @property
    def klein_dim(self) -> int:
        return self.n_spatial


def lorentz_form(v: np.ndarray) -> float:
    """Q(v) with the last coordinate timelike."""
    v = np.asarray(v, float)
    return float(v[:-1] @ v[:-1] - v[-1] * v[-1])


def lorentz_inner(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    return float(u[:-1] @ v[:-1] - u[-1] * v[-1])


@dataclass(frozen=True)
class InversiveVector:
    """A sphere/cap (Q = +1) or point (Q = 0) in Lorentz coordinates."""

    coords: np.ndarray
    setting: Setting
    is_point: bool = False

    def __post_init__(self):
        coords = np.asarray(self.coords, float)
        if coords.shape != (self.setting.vector_length,):
            raise GeometryError(
                f"vector length {coords.shape} does not match setting {self.setting}"
            )
        if self.is_point:
            if abs(lorentz_form(coords)) > 1e-6 * max(1.0, coords @ coords):
                raise GeometryError("point vector is not null")
        else:
            q = lorentz_form(coords)
            if q <= 0:
                raise GeometryError(f"sphere vector has Q = {q} <= 0")
            coords = coords / math.sqrt(q)
        object.__setattr__(self, "coords", _frozen_array(coords))

    def q(self) -> float:
        return lorentz_form(self.coords)

    @staticmethod
    def from_center_radius(center, radius: float, dim: int | None = None) -> "InversiveVector":
        """Sphere in the ball setting from Euclidean center and radius > 0."""
        c = np.asarray(center, float)
        if radius <= 0:
            raise GeometryError("radius must be positive")
        a = float(c @ c)
        coords = np.concatenate(
            [c / radius, [(a - radius * radius - 1) / (2 * radius),
                          (a - radius * radius + 1) / (2 * radius)]]
        )
        return InversiveVector(coords, Setting.ball(dim or len(c)))

    @staticmethod
    def from_cap(pole, theta: float, dim: int | None = None) -> "InversiveVector":
        """Cap on S^d from unit pole and angular radius theta in (0, pi)."""
        n = np.asarray(pole, float)
        n = n / np.linalg.norm(n)
        if not 0 < theta < math.pi:
            raise GeometryError("cap angular radius must lie in (0, pi)")
        st = math.sin(theta)
        coords = np.concatenate([n / st, [math.cos(theta) / st]])
        return InversiveVector(coords, Setting.sphere(dim or len(n) - 1))

    @staticmethod
    def from_point(p, setting: Setting) -> "InversiveVector":
        return InversiveVector(encode_point(np.asarray(p, float), setting), setting, is_point=True)

    @staticmethod
    def unit_sphere(dim: int) -> "InversiveVector":
        """The unit sphere of the ball setting (the fixed vector of
        ball-preserving maps)."""
        coords = np.zeros(dim + 2)
        coords[dim] = -1.0
        return InversiveVector(coords, Setting.ball(dim))


def encode_point(p: np.ndarray, setting: Setting) -> np.ndarray:
    p = np.asarray(p, float)
    if p.shape != (setting.n_spatial,):
        raise GeometryError(f"point has {p.shape} coords, expected {setting.n_spatial}")
    if setting.kind == "ball":
        a = float(p @ p)
        return np.concatenate([p, [(a - 1) / 2, (a + 1) / 2]])
    return np.concatenate([p, [1.0]])


def decode_point(v: np.ndarray, setting: Setting) -> np.ndarray:
    v = np.asarray(v, float)
    if setting.kind == "ball":
        den = v[-1] - v[-2]
        if den <= 1e-14 * float(np.abs(v).max()):
            raise PointAtInfinity("point decodes to infinity; input not inside the closed ball")
        return v[:-2] / den
    if abs(v[-1]) < 1e-300:
        raise GeometryError("sphere-setting point vector has zero timelike part")
    return v[:-1] / v[-1]


@dataclass(frozen=True)
class MobiusMap:
    """Orthochronous Lorentz matrix acting on inversive vectors."""

    matrix: np.ndarray
    setting: Setting

    def __post_init__(self):
        m = np.asarray(self.matrix, float)
        n = self.setting.vector_length
        if m.shape != (n, n):
            raise GeometryError(f"matrix shape {m.shape} does not match setting")
        object.__setattr__(self, "matrix", _frozen_array(m))

    @staticmethod
    def identity(setting: Setting) -> "MobiusMap":
        return MobiusMap(np.eye(setting.vector_length), setting)

    @staticmethod
    def rotation(rot: np.ndarray, setting: Setting) -> "MobiusMap":
        """Embed an orthogonal matrix acting on the spatial point coordinates."""
        rot = np.asarray(rot, float)
        k = setting.n_spatial
        if rot.shape != (k, k):
            raise GeometryError(f"rotation must be {k}x{k}")
        if not np.allclose(rot.T @ rot, np.eye(k), atol=1e-10):
            raise GeometryError("rotation matrix is not orthogonal")
        m = np.eye(setting.vector_length)
        m[:k, :k] = rot
        return MobiusMap(m, setting)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other (matrix product)."""
        if self.setting != other.setting:
            raise GeometryError("cannot compose maps from different settings")
        return MobiusMap(self.matrix @ other.matrix, self.setting)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return self.compose(other)

    def inverse(self) -> "MobiusMap":
        # M^-1 = J M^T J for Lorentz matrices; avoids a linear solve.
        j = np.ones(self.setting.vector_length)
        j[-1] = -1.0
        return MobiusMap((self.matrix.T * j[:, None]) * j[None, :], self.setting)

    def preserves_form(self, tol: float = NORM_TOL) -> bool:
        n = self.setting.vector_length
        j = np.eye(n)
        j[-1, -1] = -1.0
        return bool(np.abs(self.matrix.T @ j @ self.matrix - j).max() <= tol)

    def is_orthochronous(self) -> bool:
        return bool(self.matrix[-1, -1] > 0)

    def fixes_unit_sphere(self, tol: float = NORM_TOL) -> bool:
        if self.setting.kind != "ball":
            return False
        u = InversiveVector.unit_sphere(self.setting.dim).coords
        return bool(np.abs(self.matrix @ u - u).max() <= tol)


@dataclass(frozen=True)
class BallPoint:
    """Point of the open unit ball in the Poincare model."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, float)
        if float(c @ c) >= 1.0:
            raise GeometryError("Poincare point must lie strictly inside the unit ball")
        object.__setattr__(self, "coords", _frozen_array(c))

    @property
    def dim(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class KleinPoint:
    """Point of the open unit ball in the Klein model."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, float)
        if float(c @ c) >= 1.0:
            raise GeometryError("Klein point must lie strictly inside the unit ball")
        object.__setattr__(self, "coords", _frozen_array(c))

    @property
    def dim(self) -> int:
        return len(self.coords)


def _coords(p) -> np.ndarray:
    return p.coords if isinstance(p, (BallPoint, KleinPoint)) else np.asarray(p, float)


def poincare_to_klein(p: BallPoint | np.ndarray) -> KleinPoint:
    c = _coords(p)
    return KleinPoint(2 * c / (1 + float(c @ c)))


def klein_to_poincare(k: KleinPoint | np.ndarray) -> BallPoint:
    c = _coords(k)
    return BallPoint(c / (1 + math.sqrt(max(0.0, 1 - float(c @ c)))))


def klein_to_poincare_coords(k: np.ndarray) -> np.ndarray:
    """Array version used in evaluator hot paths; no wrapper allocation."""
    k = np.asarray(k, float)
    return k / (1 + np.sqrt(np.maximum(0.0, 1 - (k * k).sum(-1)))[..., None])


def hyperbolic_distance(p: BallPoint | np.ndarray, q: BallPoint | np.ndarray) -> float:
    a = _coords(p)
    b = _coords(q)
    diff = a - b
    arg = 1 + 2 * float(diff @ diff) / ((1 - float(a @ a)) * (1 - float(b @ b)))
    return math.acosh(max(1.0, arg))


def recenter_map(a, setting: Setting) -> MobiusMap:
    """Hyperbolic translation (pure Lorentz boost) mapping viewpoint ``a`` to
    the model center; in the ball setting it fixes the unit-sphere vector."""
    c = _coords(a)
    k = setting.n_spatial
    if c.shape != (k,):
        raise GeometryError(f"viewpoint has {c.shape} coords, expected {k}")
    n = setting.vector_length
    norm = float(np.linalg.norm(c))
    if norm >= 1.0:
        raise GeometryError("viewpoint must lie strictly inside the unit ball")
    m = np.eye(n)
    if norm < 1e-300:
        return MobiusMap(m, setting)
    u = c / norm
    chi = -2 * math.atanh(norm)
    ch, sh = math.cosh(chi), math.sinh(chi)
    m[:k, :k] += (ch - 1) * np.outer(u, u)
    m[:k, -1] = sh * u
    m[-1, :k] = sh * u
    m[-1, -1] = ch
    return MobiusMap(m, setting)


def apply_point(m: MobiusMap, p):
    """Transform a point (ball: inside the unit ball; sphere: on S^d).

    Returns the same flavor as the input (BallPoint in, BallPoint out).
    """
    c = _coords(p)
    w = m.matrix @ encode_point(c, m.setting)
    out = decode_point(w, m.setting)
    if isinstance(p, BallPoint):
        return BallPoint(out)
    return out


def apply_sphere(m: MobiusMap, s: InversiveVector) -> InversiveVector:
    if s.is_point:
        raise GeometryError("apply_sphere expects a sphere/cap vector (Q = 1)")
    if s.setting != m.setting:
        raise GeometryError("sphere and map settings differ")
    return InversiveVector(m.matrix @ s.coords, m.setting)


def euclidean_center_radius(s: InversiveVector) -> tuple[np.ndarray, float]:
    """Invert the ball-setting sphere encoding.

    Raises NonBallImage when the vector models a hyperplane or an inverted
    sphere, which signals an input sphere not strictly inside the unit ball.
    """
    if s.setting.kind != "ball":
        raise GeometryError("euclidean_center_radius needs a ball-setting vector")
    v = s.coords
    w = v[-1] - v[-2]
    if w <= 1e-14 * float(np.abs(v).max()):
        raise NonBallImage("sphere vector does not bound a ball (hyperplane or complement)")
    r = 1.0 / w
    return r * v[:-2], r


def cap_angular_radius(s: InversiveVector) -> float:
    if s.setting.kind != "sphere":
        raise GeometryError("cap_angular_radius needs a sphere-setting vector")
    # theta = arccot(timelike); atan2 keeps the full (0, pi) range.
    return math.atan2(1.0, float(s.coords[-1]))


def cap_pole_radius(s: InversiveVector) -> tuple[np.ndarray, float]:
    theta = cap_angular_radius(s)
    spatial = s.coords[:-1]
    return spatial / np.linalg.norm(spatial), theta


def hyperbolic_center_radius(s: InversiveVector) -> tuple[np.ndarray, float]:
    """Hyperbolic center (Poincare coords) and hyperbolic radius of a
    ball-setting sphere; the radius is ``inf`` for horospheres."""
    c, r = euclidean_center_radius(s)
    x0 = float(np.linalg.norm(c))
    direction = c / x0 if x0 > 1e-300 else np.zeros_like(c)
    lo = x0 - r
    hi = x0 + r
    d_lo = 2 * math.atanh(lo)  # signed: negative when the origin is inside
    if hi >= 1.0 - 1e-14:
        return direction * 1.0, math.inf  # tangent: ideal center
    d_hi = 2 * math.atanh(hi)
    center_dist = (d_lo + d_hi) / 2
    return direction * math.tanh(center_dist / 2), (d_hi - d_lo) / 2


def conformal_factor(a, x) -> float:
    """Length scaling |f'(x)| of the recentering map with viewpoint ``a``."""
    ac = _coords(a)
    xc = _coords(x)
    den = 1 - 2 * float(ac @ xc) + float(ac @ ac) * float(xc @ xc)
    return (1 - float(ac @ ac)) / den


def hyperboloid_from_klein(x: np.ndarray, setting: Setting) -> np.ndarray:
    """Unit timelike vector of the viewpoint given in Klein coordinates,
    embedded in the full inversive space (extra coordinate zero)."""
    x = np.asarray(x, float)
    k = setting.n_spatial
    if x.shape != (k,):
        raise GeometryError(f"Klein point has {x.shape} coords, expected {k}")
    s2 = float(x @ x)
    if s2 >= 1.0:
        raise GeometryError("Klein point must lie strictly inside the unit ball")
    scale = 1.0 / math.sqrt(1 - s2)
    out = np.zeros(setting.vector_length)
    out[:k] = scale * x
    out[-1] = scale
    return out


def apply_viewpoint(m: MobiusMap, x: np.ndarray) -> np.ndarray:
    """Transport a viewpoint given in Klein coordinates by a Mobius map.

    Viewpoints are interior hyperbolic points, so they ride on the
    hyperboloid rather than the null cone (which carries boundary points).
    """
    x = _coords(x)
    w = m.matrix @ hyperboloid_from_klein(x, m.setting)
    if w[-1] <= 0:
        raise GeometryError("map does not preserve the future cone")
    return w[: m.setting.n_spatial] / w[-1]


def sphere_through_points(points: list[np.ndarray], setting: Setting,
                          orthogonal_to_unit: bool = False) -> np.ndarray:
    """Lorentz vector (Q = 1) of the sphere/cap through the given points.

    ``orthogonal_to_unit`` additionally requires orthogonality to the unit
    sphere (ball setting), i.e. a hyperbolic geodesic hyperplane.  Raises
    GeometryError when the points do not determine a unique solution.
    """
    rows = [encode_point(np.asarray(p, float), setting) for p in points]
    if orthogonal_to_unit:
        if setting.kind != "ball":
            raise GeometryError("orthogonal_to_unit only applies to the ball setting")
        rows.append(InversiveVector.unit_sphere(setting.dim).coords)
    j = np.ones(setting.vector_length)
    j[-1] = -1.0
    a = np.asarray(rows) * j[None, :]  # rows give B(row_i, x) as plain dot products
    _, sv, vt = np.linalg.svd(a)
    null_dim = setting.vector_length - int(np.sum(sv > 1e-10 * max(1.0, sv[0])))
    if null_dim != 1:
        raise GeometryError("points do not determine a unique sphere")
    v = vt[-1]
    q = lorentz_form(v)
    if q <= 1e-12:
        raise GeometryError("sphere through points is degenerate (null or timelike vector)")
    return v / math.sqrt(q)

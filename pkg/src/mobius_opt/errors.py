"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for geometric domain violations."""


class NonBallImage(GeometryError):
    """Sphere vector does not bound a ball inside the unit ball (hyperplane,
    inverted sphere, or input crossing the unit sphere)."""


class PointAtInfinity(GeometryError):
    """Transformed point decodes to the point at infinity (ball setting)."""


class DegenerateEdge(GeometryError):
    """Edge endpoints coincide."""


class DegenerateFace(GeometryError):
    """Face triple does not determine a hyperbolic hyperplane."""


class DegenerateHull(GeometryError):
    """Point set is degenerate (coplanar / concircular); no full-dimensional hull."""


class NonPlanarInput(ValueError):
    """Rotation system fails the Euler check for a connected planar embedding."""


class NonConvergence(RuntimeError):
    """Circle packing iteration did not reach the residual tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InfeasibleConstraint(RuntimeError):
    """Every sampled viewpoint violates a constant (barrier) constraint."""


class UnsupportedDimension(ValueError):
    """Operation only defined for two-dimensional content."""


class SceneValidationError(ValueError):
    """Scene description is inconsistent; message carries object indices."""

"""Optimal Mobius transformations via quasiconvex programming.

Find viewpoints in hyperbolic space maximizing the minimum size of
transformed spheres, caps, edges, or point separations, with application
drivers for spherical graph drawing, hyperbolic-browser focus selection,
conformal structured meshing, and flat mapping.
"""

from .errors import (
    DegenerateEdge,
    DegenerateFace,
    DegenerateHull,
    GeometryError,
    InfeasibleConstraint,
    NonBallImage,
    NonConvergence,
    NonPlanarInput,
    PointAtInfinity,
    SceneValidationError,
    UnsupportedDimension,
)
from .geometry import (
    BallPoint,
    InversiveVector,
    KleinPoint,
    MobiusMap,
    Setting,
    apply_point,
    apply_sphere,
    apply_viewpoint,
    cap_angular_radius,
    cap_pole_radius,
    conformal_factor,
    euclidean_center_radius,
    hyperbolic_center_radius,
    hyperbolic_distance,
    klein_to_poincare,
    poincare_to_klein,
    recenter_map,
)
from .objectives import (
    SizeTerm,
    ball_edge_term,
    ball_sphere_radius_term,
    cap_radius_term,
    klein_disk_size_term,
    make_instance,
    orientation_barrier_term,
    point_size_term,
    sphere_edge_term,
)
from .solver import (
    BARRIER,
    Instance,
    ObjectiveTerm,
    Solution,
    SolverConfig,
    active_terms,
    evaluate_max,
    minimize_max,
)

__version__ = "0.1.0"

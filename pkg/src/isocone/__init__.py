"""Numerical geometry of spherical cones: curvature, isoperimetry,
symmetrization, and Yamabe-type lower bounds for products with a line or
a circle."""

from .bounds import (
    BoundReport,
    CatalogEntry,
    compare_bounds,
    ilias_bound,
    parse_manifold,
    product_circle_bound,
    product_einstein,
    rv_bound,
)
from .geometry import (
    EinsteinData,
    RadialProfile,
    SphereConstants,
    SphericalCone,
    cone_ball_area,
    cone_ball_volume,
    cone_ricci,
    cone_sectional,
    conformal_factor_f0,
    conformal_map_h0,
    sphere_volume,
    sphere_yamabe,
)
from .isoperimetry import (
    IsoProfile,
    SliceSet,
    StabilityInput,
    cone_iso_profile,
    enlarge_ball,
    minkowski_content,
    neighborhood_volume,
    slice_stability_margin,
    sphere_iso_profile,
    suspension_distance,
    symmetrize_set,
)
from .symmetrization import (
    ConeFunction,
    dirichlet_energy,
    rearrange,
    superlevel_volume,
    transfer_to_sphere,
    yamabe_quotient,
)
from .variational import (
    LineProblem,
    MinimizeResult,
    closed_form_line,
    euler_lagrange_residual,
    line_quotient,
    minimize_line,
    pull_line_to_cone,
)

__version__ = "0.1.0"

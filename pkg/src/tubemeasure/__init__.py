"""Bounds, covers, and constructive checks for the tube measure.

The tube measure of a set E in R^n is the cheapest way to cover E by
neighbourhoods of straight lines, where a tube of radius r costs its
cross-section volume gamma_{n-1} r^{n-1}.  This package computes the
standard upper bound (smallest shadow over directions) and lower bound
(volume over diameter), evaluates and searches explicit tube covers,
and walks through the constructive steps showing that no set can be
split into two halves that are both "large" for this measure.
"""

from .bounds import (
    BoundReport,
    compute_bounds,
    lower_bound_volume_diam,
    plank_value_2d,
    product_measure,
    sphere_directions,
    square_tube_exact_measure,
    truncated_product_lower,
    tube_exact_measure,
    upper_bound_min_projection,
)
from .covers import (
    TubeCover,
    cover_check,
    cover_cost,
    cover_search,
    parallel_cover_from_projection,
)
from .errors import (
    DegenerateShapeError,
    DimensionError,
    GeometryError,
    InvariantError,
    NoWitnessError,
    ParameterError,
    SchemaError,
    StepFailureError,
    TubeMeasureError,
    UnboundedShapeError,
)
from .geometry import (
    Ball,
    ConvexPolytope,
    Cuboid,
    Frame,
    PointCloud,
    ProductSet,
    SquareTube,
    Tube,
    UnionShape,
    axis_aligned_cuboid,
    bounding_box,
    diameter,
    identity_frame,
    orthonormal_frame,
    point_in_square_tube,
    point_in_tube,
    regular_tetrahedron,
    shape_contains,
    unit_ball_volume,
    unit_vector,
    volume_exact,
)
from .montecarlo import mc_intersection_volume, mc_volume, sample_points
from .projection import Shadow, shadow_area, shadow_area_with_error
from .proof import (
    AlignedCuboidPair,
    ProofParameters,
    SquarePacking,
    WalkthroughReport,
    WalkthroughStep,
    align_cuboids,
    ball_square_packing,
    choose_parameters,
    common_refinement,
    contradiction_check,
    cuboid_in_ball,
    pigeonhole_select,
    run_proof_walkthrough,
    subdivide_tube,
)
from .serialization import (
    bound_report_to_json,
    cover_from_json,
    cover_to_json,
    rational_from_json,
    rational_to_json,
    shape_from_json,
    shape_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedCuboidPair",
    "Ball",
    "BoundReport",
    "ConvexPolytope",
    "Cuboid",
    "DegenerateShapeError",
    "DimensionError",
    "Frame",
    "GeometryError",
    "InvariantError",
    "NoWitnessError",
    "ParameterError",
    "PointCloud",
    "ProductSet",
    "ProofParameters",
    "SchemaError",
    "Shadow",
    "SquarePacking",
    "SquareTube",
    "StepFailureError",
    "Tube",
    "TubeCover",
    "TubeMeasureError",
    "UnboundedShapeError",
    "UnionShape",
    "WalkthroughReport",
    "WalkthroughStep",
    "align_cuboids",
    "axis_aligned_cuboid",
    "ball_square_packing",
    "bound_report_to_json",
    "bounding_box",
    "choose_parameters",
    "common_refinement",
    "compute_bounds",
    "contradiction_check",
    "cover_check",
    "cover_cost",
    "cover_from_json",
    "cover_search",
    "cover_to_json",
    "cuboid_in_ball",
    "diameter",
    "identity_frame",
    "lower_bound_volume_diam",
    "mc_intersection_volume",
    "mc_volume",
    "orthonormal_frame",
    "parallel_cover_from_projection",
    "pigeonhole_select",
    "plank_value_2d",
    "point_in_square_tube",
    "point_in_tube",
    "product_measure",
    "rational_from_json",
    "rational_to_json",
    "regular_tetrahedron",
    "run_proof_walkthrough",
    "sample_points",
    "shadow_area",
    "shadow_area_with_error",
    "shape_contains",
    "shape_from_json",
    "shape_to_json",
    "sphere_directions",
    "square_tube_exact_measure",
    "subdivide_tube",
    "truncated_product_lower",
    "tube_exact_measure",
    "unit_ball_volume",
    "unit_vector",
    "upper_bound_min_projection",
    "volume_exact",
]

"""
Minimal width of a convex polygon by rotating calipers
======================================================

In the plane the cheapest shadow of a convex body is its minimal width,
attained in a direction perpendicular to some edge.  Rotating calipers
finds it exactly; the generic projection search must agree.
"""

import math

import numpy as np

from tubemeasure import Ball, ConvexPolytope, plank_value_2d, upper_bound_min_projection

# a disk has the same width 2r in every direction
disk = Ball(center=np.zeros(2), radius=1.0)
width, direction = plank_value_2d(disk)
print(f"unit disk width: {width}")

# for the equilateral triangle the width is the altitude sqrt(3)/2
tri = ConvexPolytope.hull_of(
    np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])
)
width, direction = plank_value_2d(tri)
print(f"triangle width:  {width:.12f}  (altitude {math.sqrt(3.0) / 2.0:.12f})")
print(f"attained along:  {np.round(direction, 6)}")

# calipers vs. the grid-plus-refinement search on random hulls
rng = np.random.default_rng(42)
print()
print(f"{'vertices':>8} {'calipers':>12} {'search':>12} {'difference':>12}")
for _ in range(6):
    pts = rng.standard_normal((int(rng.integers(5, 12)), 2))
    poly = ConvexPolytope.hull_of(pts)
    exact, _ = plank_value_2d(poly)
    approx, _ = upper_bound_min_projection(poly, grid_points=4096)
    print(
        f"{len(pts):>8} {exact:>12.8f} {approx:>12.8f} {abs(exact - approx):>12.2e}"
    )

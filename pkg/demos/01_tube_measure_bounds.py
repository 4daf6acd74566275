"""
Two-sided bounds for the tube measure of a convex body
=======================================================

The tube measure of a set charges each infinite round cylinder by the
(n-1)-volume of its cross section and takes the cheapest cover.  Exact
values are rarely available, but a single shadow gives an upper bound
and volume / diameter gives a lower one.
"""

import numpy as np

from tubemeasure import (
    Ball,
    ConvexPolytope,
    axis_aligned_cuboid,
    compute_bounds,
    product_measure,
    truncated_product_lower,
)

# three bodies in R^3 with rather different aspect ratios
shapes = {
    "unit ball": Ball(center=np.zeros(3), radius=1.0),
    "unit cube": axis_aligned_cuboid(np.full(3, 0.5), np.full(3, 0.5)),
    "flat slab": axis_aligned_cuboid(np.zeros(3), np.array([2.0, 2.0, 0.05])),
    "random hull": ConvexPolytope.hull_of(
        np.random.default_rng(7).standard_normal((12, 3))
    ),
}

print(f"{'shape':<12} {'lower':>10} {'upper':>10} {'gap':>8}")
for name, s in shapes.items():
    report = compute_bounds(s, mc_samples=200_000, seed=1)
    gap = report.upper - report.lower
    print(f"{name:<12} {report.lower:>10.5f} {report.upper:>10.5f} {gap:>8.4f}")

# The ball is the tight case: its smallest shadow is the equatorial disk
# of area pi, and pi is also the true tube measure.  The slab shows the
# opposite regime, where one thin shadow crushes the upper bound.

# Cylinders over a planar base are the other exactly solvable family.
# A x R costs exactly area(A), and a finite segment of half-height R
# retains the fraction 2R / (2R + diam A) of that.
square = axis_aligned_cuboid(np.full(2, 0.5), np.full(2, 0.5))
print()
print("square cylinder, full:", product_measure(square))
for r_half in (1.0, 10.0, 100.0):
    print(f"  truncated at R={r_half:>5}: {truncated_product_lower(square, r_half):.6f}")

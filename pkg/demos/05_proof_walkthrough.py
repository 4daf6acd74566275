"""
The contradiction argument, step by step
========================================

Assume a set of full tube measure could concentrate near few tubes.
Subdividing, selecting a heavy square tube, placing two disjoint balls
inside it, and inscribing aligned cuboids produces two bodies that each
carry more than half of the enclosing tube's cost.  The numbers below
show the inequality landing strictly above 1 in every dimension.
"""

from fractions import Fraction

import numpy as np

from tubemeasure import (
    Ball,
    choose_parameters,
    contradiction_check,
    cuboid_in_ball,
    run_proof_walkthrough,
    volume_exact,
)

# the inscribed cuboid behind the inequality: long edge by Pythagoras
ball = Ball(center=np.zeros(3), radius=1.0)
cuboid = cuboid_in_ball(ball, np.array([0.0, 0.0, 1.0]), eta=0.5)
print(f"cuboid in the unit ball, eta = 0.5: volume {volume_exact(cuboid):.7f}")

print(f"\n{'n':>2} {'p':>10} {'eps':>12} {'rhs':>10}")
for n in range(2, 9):
    params = choose_parameters(n, Fraction(1, 2))
    rhs, contradiction = contradiction_check(params)
    assert contradiction
    print(f"{n:>2} {params.p:>10.6f} {params.eps:>12.3e} {rhs:>10.6f}")

# sloppy parameters do not contradict anything; the check just says no
from tubemeasure import ProofParameters

rhs, contradiction = contradiction_check(
    ProofParameters(n=3, p=0.6, eps=0.3, delta=Fraction(1), eta=1.2)
)
print(f"\noversized p: rhs {rhs:.4f}, contradiction: {contradiction}")

# the full nine-step walkthrough in the plane
report = run_proof_walkthrough(2, depth=6, seed=0)
print(f"\nwalkthrough in dimension {report.n}, depth {report.depth}")
for step in report.steps:
    print(f"  {'ok' if step.passed else 'FAIL':>4}  {step.name}")
print(f"final inequality rhs: {report.steps[-1].outputs['rhs']:.6f}")

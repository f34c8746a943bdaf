"""
How sharp is the expected-error bound?
======================================

The mean squared error of randomized Kaczmarz after ``k`` projections is
at most ``(1 - kappa**-2)**k`` times the initial one.  On a system built
from repeated basis vectors the bound holds with equality, and on small
systems we can compute the expectation exactly by enumerating every row
sequence.  This script compares the bound, the exact expectation and a
Monte Carlo estimate.
"""
import math

import numpy as np

from rkaczmarz import LinearSystem, SolverOptions, condition_numbers, kaczmarz_randomized
from rkaczmarz.problems import tightness_system
from rkaczmarz.theory import exact_expected_error, expected_iterations, theorem1_bound, theorem2_lower_bound

# Equality case: x0 = e1 either stays or drops to the solution 0.
inst = tightness_system(4, 8, math.sqrt(8))
e1 = np.eye(4)[0]
exact = exact_expected_error(inst.system, e1, 6)
print("tightness system, kappa^2 = 8")
print(f"{'k':>3} {'exact':>10} {'bound':>10} {'lower':>10}")
for k, e in enumerate(exact):
    print(f"{k:3d} {e:10.6f} {theorem1_bound(inst.kappa, k, 1.0):10.6f} "
          f"{theorem2_lower_bound(inst.kappa, k, 1.0):10.6f}")

# A generic system sits strictly below the bound.
gen = np.random.default_rng(2)
A = gen.standard_normal((4, 3))
x = gen.standard_normal(3)
system = LinearSystem(A, A @ x, x)
kappa = condition_numbers(A).kappa
exact = exact_expected_error(system, np.zeros(3), 7)
runs = 2000
mc = np.zeros(8)
for seed in range(runs):
    opts = SolverOptions(max_projections=7, target_error=1e-300, trace_stride=1, seed=seed)
    err = kaczmarz_randomized(system, opts).column("error") ** 2
    mc[: err.size] += err
    mc[err.size:] += err[-1]
mc /= runs
print()
print(f"random 4x3 system, kappa = {kappa:.3f}")
print(f"{'k':>3} {'exact':>10} {'Monte Carlo':>12} {'bound':>10}")
for k in range(8):
    print(f"{k:3d} {exact[k]:10.5f} {mc[k]:12.5f} {theorem1_bound(kappa, k, exact[0]):10.5f}")

exact_k, approx_k = expected_iterations(kappa, 1e-6)
print()
print(f"projections for a 1e-6 reduction in RMS error: {exact_k:.1f} (large-kappa form {approx_k:.1f})")

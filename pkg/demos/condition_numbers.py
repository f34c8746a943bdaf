"""
Two condition numbers of a tall matrix
======================================

The randomized Kaczmarz rate is governed by the *scaled* condition number
``kappa(A) = ||A||_F / sigma_min``, not by the usual ``k(A) = sigma_max / sigma_min``.
The two are tied by ``1 <= kappa / sqrt(n) <= k``.  This script measures
both on Gaussian matrices of growing size and compares them with their
large-matrix limits.
"""
import math

from rkaczmarz import RngStream, condition_numbers
from rkaczmarz.problems import gaussian_system, tightness_system
from rkaczmarz.theory import gaussian_asymptotics

rng = RngStream(1)

# For Gaussian matrices with n/m -> y both numbers settle down quickly.
y = 0.25
k_lim, ratio_lim = gaussian_asymptotics(y)
print(f"limits at y = {y}: k -> {k_lim:.3f}, kappa/sqrt(n) -> {ratio_lim:.3f}")
print(f"{'m':>6} {'n':>5} {'k(A)':>8} {'kappa/sqrt(n)':>14}")
for n in (25, 50, 100, 200):
    rep = condition_numbers(gaussian_system(4 * n, n, rng).A)
    print(f"{4 * n:6d} {n:5d} {rep.k:8.4f} {rep.kappa / math.sqrt(n):14.4f}")

# Repeated basis vectors give a matrix with a known scaled condition number.
inst = tightness_system(4, 8, math.sqrt(8))
print()
print("rows per basis vector:", inst.multiplicities)
print(condition_numbers(inst.system.A))

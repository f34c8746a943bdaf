"""
Randomized Kaczmarz against CGLS on Gaussian systems
===================================================

Both solvers are priced in real floating point operations: a Kaczmarz
projection costs ``16 n + 8`` and a CGLS iteration ``16 m n + 16 (m + n) + 20``.
The analytic estimates predict that Kaczmarz wins for tall systems
(small ``y = n/m``) and CGLS for nearly square ones, with the crossover
near ``y = 1/3``.  The measured flop counts below show where the
balance lies for this flop model.
"""
from rkaczmarz import RngStream, SolverOptions, cgls, kaczmarz_randomized
from rkaczmarz.problems import gaussian_system, subsample_rows
from rkaczmarz.theory import cgls_complexity, crossover_ratio, rk_complexity

eps = 1e-14
print(f"predicted crossover ratio for eps = {eps:g}: y* = {crossover_ratio(eps):.4f}")
print()
print(f"{'m':>5} {'n':>4} {'RK Mflop':>10} {'CGLS Mflop':>11} {'CGLS/RK':>8} {'predicted':>10}")
n = 100
for m in (200, 300, 500, 1000):
    rk_flops = cg_flops = 0
    trials = 5
    for t in range(trials):
        system = gaussian_system(m, n, RngStream(1000 * m + t))
        rk_flops += kaczmarz_randomized(system, SolverOptions(target_error=eps, seed=t)).flops
        cg_flops += cgls(system, SolverOptions(target_error=eps)).flops
    y = n / m
    predicted = cgls_complexity(n, y, eps).flops / rk_complexity(n, y, eps).flops
    print(f"{m:5d} {n:4d} {rk_flops / trials / 1e6:10.1f} {cg_flops / trials / 1e6:11.1f} "
          f"{cg_flops / rk_flops:8.3f} {predicted:10.3f}")

# CGLS is cheapest near y = 1/e, so for a very tall system it can pay to
# throw rows away first.
print()
system = gaussian_system(500, 100, RngStream(7))
full = cgls(system, SolverOptions(target_error=eps))
sub = cgls(subsample_rows(system, 272, RngStream(8)), SolverOptions(target_error=eps))
print(f"CGLS on all 500 rows: {full.iterations} iterations, {full.flops / 1e6:.1f} Mflop")
print(f"CGLS on 272 random rows: {sub.iterations} iterations, {sub.flops / 1e6:.1f} Mflop")

"""Monte Carlo helpers shared by the test modules."""
import numpy as np

from rkaczmarz import SolverOptions, kaczmarz_randomized


def mc_squared_errors(system, x0, k_max, seeds):
    """Squared error after each of ``k = 0..k_max`` projections, one row per seed.

    A run that hits the solution stops early; its error stays at that value.
    """
    out = np.empty((len(seeds), k_max + 1))
    for row, seed in enumerate(seeds):
        opts = SolverOptions(x0=x0, max_projections=k_max, target_error=1e-300, trace_stride=1, seed=seed)
        tr = kaczmarz_randomized(system, opts)
        err = tr.column("error") ** 2
        out[row, : err.size] = err
        out[row, err.size:] = err[-1]
    return out


def mean_and_se(samples):
    mean = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / np.sqrt(samples.shape[0])
    return mean, se



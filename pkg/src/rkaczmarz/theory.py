"""
Closed-form convergence and complexity predictors.

``kappa`` is always the scaled condition number ``||A||_F ||A^{-1}||_2``
and ``log`` the natural logarithm.  The complexity formulas describe
Gaussian ``m x n`` systems with aspect ratio ``y = n / m`` in the large-``n``
limit.

:func:`exact_expected_error` is a brute-force oracle: it enumerates every
row sequence of a small system and returns the exact expected squared error
of squared-norm randomized Kaczmarz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, EnumerationBudgetError, ParameterError
from .matcore import as_vector, row_norms_sq

__all__ = [
    "ComplexityEstimate",
    "cgls_complexity",
    "crossover_ratio",
    "exact_expected_error",
    "expected_iterations",
    "gaussian_asymptotics",
    "rk_complexity",
    "theorem1_bound",
    "theorem2_lower_bound",
]

ENUMERATION_BUDGET = 10**7
_CHUNK_STATES = 1 << 15


def theorem1_bound(kappa: float, k: int, e0_sq: float) -> float:
    """Upper bound ``(1 - kappa**-2)**k * e0_sq`` on the mean squared error after k projections."""
    if kappa < 1:
        raise DomainError(f"scaled condition number must be >= 1, got {kappa}")
    if e0_sq < 0 or k < 0:
        raise DomainError("k and e0_sq must be non-negative")
    return (1.0 - kappa ** -2) ** k * e0_sq


def theorem2_lower_bound(kappa: float, k: int, e0_sq: float) -> float:
    """Lower bound ``(1 - 2k / kappa**2) * e0_sq`` for the worst starting point.

    Not clamped at zero.
    """
    if kappa < 1:
        raise DomainError(f"scaled condition number must be >= 1, got {kappa}")
    return (1.0 - 2.0 * k / kappa**2) * e0_sq


def expected_iterations(kappa: float, eps: float):
    """Projections needed to shrink the mean squared error by ``eps**2``.

    Returns ``(exact, approx)`` with ``exact = 2 log(eps) / log(1 - kappa**-2)``
    and its large-kappa form ``approx = 2 kappa**2 log(1/eps)``.
    """
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if not kappa > 1:
        raise DomainError(f"kappa must exceed 1, got {kappa}")
    exact = 2.0 * math.log(eps) / math.log1p(-kappa ** -2)
    approx = 2.0 * kappa**2 * math.log(1.0 / eps)
    return exact, approx


@dataclass(frozen=True)
class ComplexityEstimate:
    flops: float
    iterations: float
    formula: str


def _check_ratio(y):
    if not 0 < y < 1:
        raise DomainError(f"aspect ratio y = n/m must lie in (0, 1), got {y}")


def _check_eps(eps):
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")


def rk_complexity(n: int, y: float, eps: float) -> ComplexityEstimate:
    _check_ratio(y)
    _check_eps(eps)
    iterations = 2.0 * n / (1.0 - math.sqrt(y)) ** 2 * math.log(1.0 / eps)
    return ComplexityEstimate(flops=n * iterations, iterations=iterations, formula="randomized_kaczmarz")


def cgls_complexity(n: int, y: float, eps: float) -> ComplexityEstimate:
    _check_ratio(y)
    _check_eps(eps)
    iterations = 2.0 * math.log(2.0 / eps) / math.log(1.0 / y)
    # two matvecs of n**2 / y operations each
    flops = 2.0 * n * n / y * iterations
    return ComplexityEstimate(flops=flops, iterations=iterations, formula="cgls")


def crossover_ratio(eps: float, lo: float = 0.01, hi: float = 0.99, xtol: float = 1e-12) -> float:
    """Aspect ratio at which the Kaczmarz and CGLS complexity estimates agree."""
    _check_eps(eps)

    def gap(y):
        return rk_complexity(1, y, eps).flops - cgls_complexity(1, y, eps).flops

    if gap(lo) * gap(hi) > 0:
        raise DomainError(f"complexity curves do not cross on ({lo}, {hi}) for eps={eps}")
    return bisect(gap, lo, hi, xtol=xtol)


def gaussian_asymptotics(y: float):
    """Limits of ``k(A)`` and ``kappa(A) / sqrt(n)`` for Gaussian matrices with ``n/m -> y``."""
    _check_ratio(y)
    r = math.sqrt(y)
    return (1.0 + r) / (1.0 - r), 1.0 / (1.0 - r)


def exact_expected_error(system, x0, k_max: int, *, budget: int = ENUMERATION_BUDGET):
    """Exact ``E ||x_k - x||^2`` for ``k = 0..k_max`` by enumerating all row sequences.

    Each of the ``m**k`` sequences of length ``k`` is weighted by the
    product of its row probabilities ``||a_j||^2 / ||A||_F^2``.  Levels are
    expanded breadth-first and split into fixed-size blocks once they grow
    large; sums are accumulated in a fixed order, so the result is
    reproducible.

    Raises
    ------
    EnumerationBudgetError
        If ``m**k_max`` exceeds ``budget``.
    """
    if system.x_true is None:
        raise ParameterError("the enumeration oracle needs a system with known x_true")
    if k_max < 0:
        raise ParameterError("k_max must be non-negative")
    A = np.asarray(system.A)
    m, n = A.shape
    if m**k_max > budget:
        raise EnumerationBudgetError(f"{m}**{k_max} sequences exceed the budget of {budget}")
    norms = row_norms_sq(A)
    if np.any(norms == 0):
        raise ParameterError("zero rows have no projection")
    probs = norms / norms.sum()
    normals = A.conj() / norms[:, None]
    b = np.asarray(system.b)
    x_true = np.asarray(system.x_true)
    sums = np.zeros(k_max + 1)

    def expand(states, weights, depth):
        d = states - x_true
        sums[depth] += float(weights @ np.sum(d.real**2 + d.imag**2, axis=1))
        if depth == k_max:
            return
        corr = b[None, :] - states @ A.T                      # (S, m)
        nxt = states[:, None, :] + corr[:, :, None] * normals[None, :, :]
        nxt = nxt.reshape(-1, n)
        w = (weights[:, None] * probs[None, :]).reshape(-1)
        for start in range(0, nxt.shape[0], _CHUNK_STATES):
            expand(nxt[start:start + _CHUNK_STATES], w[start:start + _CHUNK_STATES], depth + 1)

    start = np.array(as_vector(x0, n))[None, :]
    expand(start, np.ones(1), 0)
    return sums.tolist()

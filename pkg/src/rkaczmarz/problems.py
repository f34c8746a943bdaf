"""
Instance generators: Gaussian systems, row subsampling, the orthonormal
tightness system, clustered-spectrum matrices and trigonometric sampling
systems.

All generators draw from an :class:`~rkaczmarz.randsrc.RngStream` and return
consistent :class:`~rkaczmarz.solvers.LinearSystem` objects.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, ParameterError
from .randsrc import RngStream
from .solvers import LinearSystem

__all__ = [
    "TightnessInstance",
    "TrigInstance",
    "clustered_spectrum_system",
    "evaluate_trig_poly",
    "gaussian_system",
    "groechenig_bound",
    "jittered_nodes",
    "max_torus_gap",
    "random_coefficients",
    "subsample_rows",
    "tightness_system",
    "trig_system",
    "uniform_sorted_nodes",
]


def gaussian_system(m: int, n: int, rng: RngStream) -> LinearSystem:
    """``A`` with i.i.d. N(0, 1) entries, standard normal ``x_true``, ``b = A x_true``."""
    if not m >= n >= 1:
        raise ParameterError(f"need m >= n >= 1, got m={m}, n={n}")
    A = rng.standard_normal((m, n))
    x = rng.standard_normal(n)
    return LinearSystem(A, A @ x, x)


def subsample_rows(system: LinearSystem, target_m: int, rng: RngStream) -> LinearSystem:
    """Rows drawn uniformly without replacement, in random order."""
    if not system.n <= target_m <= system.m:
        raise ParameterError(f"target_m must lie in [{system.n}, {system.m}], got {target_m}")
    order = np.argsort(rng.uniform01(system.m), kind="stable")[:target_m]
    return LinearSystem(system.A[order], system.b[order], system.x_true)


@dataclass(frozen=True)
class TightnessInstance:
    n: int
    m: int
    kappa: float
    multiplicities: tuple
    system: LinearSystem


def tightness_system(n: int, m: int, kappa: float) -> TightnessInstance:
    """Homogeneous system whose rows are repeated standard basis vectors.

    ``e_1`` appears exactly ``m / kappa**2`` times and the remaining rows
    are dealt to ``e_2, ..., e_n`` in turn.  Started from ``x0 = e_1``,
    squared-norm randomized Kaczmarz jumps to the solution 0 with
    probability ``kappa**-2`` per step and otherwise stays put, so its mean
    squared error is exactly ``(1 - kappa**-2)**k``.
    """
    if n < 1 or m < n:
        raise ParameterError(f"need m >= n >= 1, got m={m}, n={n}")
    ratio = m / kappa**2
    q = round(ratio)
    if q < 1 or abs(ratio - q) > 1e-9 * max(1.0, ratio):
        raise ParameterError(f"m / kappa**2 must be a positive integer, got {ratio}")
    if kappa**2 < n * (1 - 1e-12):
        raise ParameterError(f"kappa**2 must be at least n={n}, got {kappa**2}")
    if n == 1 and q != m:
        raise ParameterError("with n = 1 every row is e_1, so kappa must be 1")
    counts = [q] + [0] * (n - 1)
    for i in range(m - q):
        counts[1 + i % (n - 1)] += 1
    rows = np.repeat(np.arange(n), counts)
    A = np.eye(n)[rows]
    system = LinearSystem(A, np.zeros(m), np.zeros(n))
    return TightnessInstance(n=n, m=m, kappa=float(kappa), multiplicities=tuple(counts), system=system)


def _haar_orthogonal(n, rng):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def clustered_spectrum_system(n: int, sigma_small: float, rng: RngStream) -> LinearSystem:
    """Square ``U diag(1, ..., 1, sigma_small) V^T`` with Haar-random orthogonal ``U``, ``V``."""
    if n < 2:
        raise ParameterError("need n >= 2")
    if not 0 < sigma_small < 1:
        raise ParameterError(f"sigma_small must lie in (0, 1), got {sigma_small}")
    U = _haar_orthogonal(n, rng)
    V = _haar_orthogonal(n, rng)
    s = np.ones(n)
    s[-1] = sigma_small
    A = (U * s) @ V.T
    x = rng.standard_normal(n)
    return LinearSystem(A, A @ x, x)


def uniform_sorted_nodes(m: int, rng: RngStream) -> np.ndarray:
    """``m`` distinct sorted i.i.d. uniform nodes in ``[0, 1)``."""
    if m < 2:
        raise ParameterError("need at least two nodes")
    t = np.sort(rng.uniform01(m))
    while np.any(np.diff(t) == 0):
        t = np.unique(t)
        t = np.sort(np.concatenate([t, rng.uniform01(m - t.size)]))
    return t


def jittered_nodes(m: int, max_shift: float, rng: RngStream) -> np.ndarray:
    """Equispaced nodes ``j / m`` each moved by a uniform shift in ``[-max_shift, max_shift]``.

    The largest torus gap is at most ``1/m + 2 * max_shift``.
    """
    if not 0 <= max_shift < 0.5 / m:
        raise ParameterError(f"max_shift must lie in [0, 1/(2m)), got {max_shift}")
    t = np.mod(np.arange(m) / m + max_shift * (2.0 * rng.uniform01(m) - 1.0), 1.0)
    t[t >= 1.0] = 0.0
    return np.sort(t)


def random_coefficients(r: int, rng: RngStream) -> np.ndarray:
    """Standard complex Gaussian coefficients ``x_{-r}, ..., x_r``."""
    z = rng.standard_normal((2, 2 * r + 1))
    return (z[0] + 1j * z[1]) / math.sqrt(2.0)


def evaluate_trig_poly(coefficients, t):
    """``f(t) = sum_{l=-r}^{r} x_l exp(2 pi i l t)``; ``coefficients[0]`` is ``x_{-r}``."""
    x = np.asarray(coefficients, dtype=np.complex128)
    r = (x.size - 1) // 2
    if x.ndim != 1 or x.size != 2 * r + 1:
        raise ParameterError("need an odd number 2r+1 of coefficients")
    l = np.arange(-r, r + 1)
    t_arr = np.asarray(t, dtype=float)
    val = np.exp(2j * np.pi * np.multiply.outer(t_arr, l)) @ x
    return complex(val) if t_arr.ndim == 0 else val


def _check_nodes(nodes):
    t = np.asarray(nodes, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise InputError("need a 1-D array of at least two nodes")
    if np.any(t < 0) or np.any(t >= 1):
        raise InputError("nodes must lie in [0, 1)")
    if np.any(np.diff(t) <= 0):
        raise InputError("nodes must be sorted and distinct")
    return t


def max_torus_gap(nodes) -> float:
    """Largest distance between neighbours on the unit circle, wraparound included."""
    t = _check_nodes(nodes)
    return float(max(np.max(np.diff(t)), 1.0 - t[-1] + t[0]))


def groechenig_bound(delta: float, r: int) -> float:
    """Upper bound ``(1 + 2 delta r) / (1 - 2 delta r)`` on ``k(A)`` of the trig system."""
    if r < 1:
        raise DomainError("degree r must be at least 1")
    if not 0 <= delta < 1.0 / (2 * r):
        raise DomainError(f"bound needs 0 <= delta < 1/(2r) = {1 / (2 * r)}, got {delta}")
    return (1.0 + 2.0 * delta * r) / (1.0 - 2.0 * delta * r)


@dataclass(frozen=True)
class TrigInstance:
    r: int
    nodes: np.ndarray
    weights: np.ndarray
    coefficients: np.ndarray
    system: LinearSystem

    @property
    def n(self) -> int:
        return 2 * self.r + 1

    @property
    def m(self) -> int:
        return self.nodes.size


def trig_system(r: int, nodes, coefficients) -> TrigInstance:
    """Weighted sampling system for a degree-``r`` trigonometric polynomial.

    ``A[j, k] = sqrt(w_j) exp(2 pi i k t_j)`` for ``k = -r..r`` and
    ``b_j = sqrt(w_j) f(t_j)``.  The weight ``w_j`` is half the distance
    between the two neighbours of ``t_j`` on the circle: ``t_m - 1`` and
    ``t_1 + 1`` close the ends, so the weights sum to one.
    """
    t = np.array(_check_nodes(nodes))
    n = 2 * r + 1
    if r < 0 or t.size < n:
        raise ParameterError(f"need at least n = 2r+1 = {n} nodes, got {t.size}")
    x = np.asarray(coefficients, dtype=np.complex128)
    if x.shape != (n,):
        raise ParameterError(f"need {n} coefficients, got shape {x.shape}")
    ext = np.concatenate([[t[-1] - 1.0], t, [t[0] + 1.0]])
    w = (ext[2:] - ext[:-2]) / 2.0
    sw = np.sqrt(w)
    k = np.arange(-r, r + 1)
    A = sw[:, None] * np.exp(2j * np.pi * np.outer(t, k))
    b = sw * evaluate_trig_poly(x, t)
    t.flags.writeable = False
    w.flags.writeable = False
    return TrigInstance(r=r, nodes=t, weights=w, coefficients=x, system=LinearSystem(A, b, x))

"""
Dense complex linear algebra kernel.

Matrices and vectors are plain NumPy arrays of dtype ``complex128``.  Real
input is promoted, so every solver runs a single complex code path.  Arrays
returned by :func:`as_matrix` and :func:`as_vector` are marked read-only.

The inner product is conjugate-linear in its first argument,

    <u, v> = sum_j conj(u_j) v_j,

which is the convention all projection formulas in :mod:`rkaczmarz.solvers`
are written against.  With rows ``A[j]`` the normal of equation ``j`` is
``conj(A[j])``, so ``<conj(A[j]), x> = (A @ x)[j]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError, NumericalFailure, SingularMatrixError

__all__ = [
    "ConditionReport",
    "adjoint_matvec",
    "as_matrix",
    "as_vector",
    "condition_numbers",
    "frobenius_norm_sq",
    "inner_product",
    "matvec",
    "row_norm_sq",
    "row_norms_sq",
    "singular_values",
]

#: Relative off-diagonal level at which a Jacobi rotation is skipped.
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
#: sigma_min <= RANK_TOL * sigma_max is treated as rank deficiency.
RANK_TOL = 1e-13


def as_matrix(A, *, copy=False) -> np.ndarray:
    """Validate ``A`` and return it as a read-only 2-D complex array."""
    M = np.array(A, dtype=np.complex128, copy=True if copy else None, ndmin=2)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {M.shape}")
    if M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionError(f"matrix must have at least one row and column, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    if M is A:
        M = M.view()
    M.flags.writeable = False
    return M


def as_vector(x, n=None) -> np.ndarray:
    v = np.array(x, dtype=np.complex128)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionError(f"expected a vector of length {n}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise InputError("vector has non-finite entries")
    v.flags.writeable = False
    return v


def inner_product(u, v) -> complex:
    """``sum(conj(u) * v)``; raises :class:`DimensionError` on length mismatch."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionError(f"inner product of shapes {u.shape} and {v.shape}")
    return complex(np.vdot(u, v))


def _abs_sq(z):
    return z.real * z.real + z.imag * z.imag


def row_norm_sq(A, j) -> float:
    A = np.asarray(A)
    m = A.shape[0]
    if not 0 <= j < m:
        raise IndexError(f"row index {j} out of range for {m} rows")
    return float(np.sum(_abs_sq(A[j])))


def row_norms_sq(A) -> np.ndarray:
    """Squared Euclidean norms of all rows."""
    return np.sum(_abs_sq(np.asarray(A, dtype=np.complex128)), axis=1)


def frobenius_norm_sq(A) -> float:
    return float(np.sum(row_norms_sq(A)))


def matvec(A, x) -> np.ndarray:
    A = np.asarray(A)
    x = np.asarray(x)
    if x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} matrix by vector of shape {x.shape}")
    return A @ x


def adjoint_matvec(A, y) -> np.ndarray:
    """Compute ``A^* y`` without forming the conjugate transpose."""
    A = np.asarray(A)
    y = np.asarray(y)
    if y.ndim != 1 or A.shape[0] != y.shape[0]:
        raise DimensionError(
            f"cannot multiply adjoint of {A.shape} matrix by vector of shape {y.shape}"
        )
    return (y.conj() @ A).conj()


def _round_robin(N):
    """Pairings for the ``N - 1`` rounds of a round-robin tournament (``N`` even).

    Every unordered pair of ``range(N)`` appears in exactly one round, and
    the pairs inside a round are disjoint, so their rotations commute.
    """
    players = list(range(N))
    rounds = []
    for _ in range(N - 1):
        half = N // 2
        top = players[:half]
        bot = players[half:][::-1]
        rounds.append((np.array(top), np.array(bot)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _one_sided_jacobi(X, tol, max_sweeps):
    """Orthogonalize the columns of ``X`` in place; return the column norms."""
    n = X.shape[1]
    if n == 1:
        return np.linalg.norm(X, axis=0)
    N = n + (n % 2)
    if N != n:
        X = np.concatenate([X, np.zeros((X.shape[0], 1), dtype=X.dtype)], axis=1)
    rounds = _round_robin(N)
    worst = np.inf
    for sweep in range(max_sweeps):
        rotated = False
        worst = 0.0
        for P, Q in rounds:
            Xp = X[:, P]
            Xq = X[:, Q]
            alpha = np.sum(_abs_sq(Xp) if np.iscomplexobj(Xp) else Xp * Xp, axis=0)
            beta = np.sum(_abs_sq(Xq) if np.iscomplexobj(Xq) else Xq * Xq, axis=0)
            gamma = np.sum(Xp.conj() * Xq, axis=0)
            g = np.abs(gamma)
            scale = np.sqrt(alpha) * np.sqrt(beta)  # the product alpha * beta can underflow
            active = g > tol * scale
            if not np.any(active):
                continue
            rotated = True
            worst = max(worst, float(np.max(g[active] / scale[active])))
            idx = np.flatnonzero(active)
            P, Q = P[idx], Q[idx]
            Xp, Xq = Xp[:, idx], Xq[:, idx]
            alpha, beta, gamma, g = alpha[idx], beta[idx], gamma[idx], g[idx]
            # rephase q so that <x_p, x_q> becomes real; singular values are unaffected
            Xq = Xq * (gamma / g).conj()
            zeta = (beta - alpha) / (2.0 * g)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            X[:, P] = c * Xp - s * Xq
            X[:, Q] = s * Xp + c * Xq
        if not rotated:
            return np.linalg.norm(X[:, :n], axis=0)
    raise NumericalFailure(
        f"one-sided Jacobi did not converge in {max_sweeps} sweeps "
        f"(largest relative off-diagonal {worst:.3e}, tolerance {tol:.1e})"
    )


def singular_values(A, *, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Singular values of ``A`` in descending order.

    The matrix is first reduced to a square triangular factor by a
    Householder QR (``numpy.linalg.qr``), which keeps small singular values
    intact, and the factor is diagonalized by one-sided Jacobi rotations.
    Pairs are processed in round-robin order so that each round is a single
    vectorized update.  Purely real input runs in real arithmetic.

    Raises
    ------
    NumericalFailure
        If the columns are not orthogonal to ``tol`` after ``max_sweeps``.
    """
    A = as_matrix(A)
    M = A if A.shape[0] >= A.shape[1] else A.conj().T
    if not np.any(M.imag):
        M = M.real
    R = np.linalg.qr(M, mode="r")
    X = np.array(R, copy=True)
    sigma = _one_sided_jacobi(X, tol, max_sweeps)
    return np.sort(sigma)[::-1]


@dataclass(frozen=True)
class ConditionReport:
    """Condition numbers of a full-column-rank matrix.

    ``k`` is the usual condition number ``sigma_max / sigma_min`` and
    ``kappa`` the scaled one, ``||A||_F / sigma_min``.
    """

    k: float
    kappa: float
    sigma_min: float
    sigma_max: float
    frobenius: float

    def __str__(self):
        names = ("k", "kappa", "sigma_min", "sigma_max", "frobenius")
        return "\n".join(f"{name:<9} = {getattr(self, name):.17g}" for name in names)


def condition_numbers(A, *, rank_tol=RANK_TOL) -> ConditionReport:
    A = np.asarray(A, dtype=np.complex128)
    sigma = singular_values(A)
    smax = float(sigma[0])
    smin = float(sigma[-1]) if A.shape[0] >= A.shape[1] else 0.0
    if smax == 0.0 or smin <= rank_tol * smax:
        raise SingularMatrixError(smin, smax)
    fro = float(np.sqrt(frobenius_norm_sq(A)))
    return ConditionReport(k=smax / smin, kappa=fro / smin, sigma_min=smin, sigma_max=smax, frobenius=fro)

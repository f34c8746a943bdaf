"""
Kaczmarz-type row-action solvers and the CGLS baseline.

All solvers return an :class:`IterateTrace` with the error (when the true
solution is known), the residual and a cumulative flop count at regular
checkpoints.  One Kaczmarz iteration is one projection; one CGLS iteration
is one full conjugate-gradient step.  Comparisons between the two families
should use the flop column.

Flop model
----------
A complex multiply costs 6 real flops and a complex add 2.  A projection
costs ``16 n + 8``: the inner product ``8 n - 2``, the scalar update 10 and
the complex axpy ``8 n``.  A CGLS iteration costs ``16 m n + 16 m + 16 n +``
:data:`CGLS_SCALAR_FLOPS`; the two matrix-vector products dominate.  Setup
work (row norms, the initial ``A^* b``) is not counted.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DegenerateRowError, DimensionError, NumericalFailure, ParameterError
from .matcore import as_matrix, as_vector, row_norms_sq
from .randsrc import RngStream, build_row_distribution, sample_indices, uniform_distribution

__all__ = [
    "CGLS_SCALAR_FLOPS",
    "IterateTrace",
    "LinearSystem",
    "SolverOptions",
    "TraceRecord",
    "cgls",
    "cgls_iteration_flops",
    "flop_cost",
    "kaczmarz_cyclic",
    "kaczmarz_randomized",
    "kaczmarz_relaxed",
    "kaczmarz_step_flops",
    "project_row",
]

CGLS_SCALAR_FLOPS = 20
REACHED = "reached_tolerance"
EXHAUSTED = "budget_exhausted"
_DRAW_CHUNK = 8192


def kaczmarz_step_flops(n: int) -> int:
    if n < 1:
        raise ParameterError("n must be positive")
    return 16 * n + 8


def cgls_iteration_flops(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise ParameterError("dimensions must be positive")
    return 16 * m * n + 16 * m + 16 * n + CGLS_SCALAR_FLOPS


def flop_cost(kind: str, *dims: int) -> int:
    """Flops charged for one step of ``kind``.

    >>> flop_cost("kaczmarz_step", 100)
    1608
    """
    if kind == "kaczmarz_step":
        return kaczmarz_step_flops(*dims)
    if kind == "cgls_iteration":
        return cgls_iteration_flops(*dims)
    raise ParameterError(f"unknown step kind {kind!r}")


@dataclass(frozen=True)
class LinearSystem:
    """Consistent system ``A x = b`` with an optional known solution."""

    A: np.ndarray
    b: np.ndarray
    x_true: Optional[np.ndarray] = None

    def __post_init__(self):
        A = as_matrix(self.A)
        b = as_vector(self.b, A.shape[0])
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        if self.x_true is not None:
            x = as_vector(self.x_true, A.shape[1])
            object.__setattr__(self, "x_true", x)
            gap = np.linalg.norm(A @ x - b)
            if gap > 1e-10 * np.linalg.norm(b):
                raise ParameterError(f"system is not consistent with x_true: ||A x - b|| = {gap:.3e}")

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class SolverOptions:
    """Run controls shared by all solvers.

    ``max_projections`` bounds Kaczmarz projections; ``max_iterations``
    bounds CGLS steps and defaults to ``20 * n``.  ``trace_stride`` defaults
    to ``m`` for Kaczmarz variants and 1 for CGLS.  ``seed`` is an integer
    or a :class:`numpy.random.SeedSequence`.
    """

    x0: Optional[np.ndarray] = None
    max_projections: int = 1_000_000
    target_error: float = 1e-6
    trace_stride: Optional[int] = None
    relaxation: Optional[float] = None
    seed: object = 0
    max_iterations: Optional[int] = None

    def __post_init__(self):
        if not self.target_error > 0:
            raise ParameterError(f"target_error must be positive, got {self.target_error}")
        if self.relaxation is not None and not 0 < self.relaxation < 2:
            raise ParameterError(
                f"relaxation must lie in (0, 2) for consistent systems, got {self.relaxation}"
            )
        if self.max_projections < 0:
            raise ParameterError("max_projections must be non-negative")
        if self.trace_stride is not None and self.trace_stride < 1:
            raise ParameterError("trace_stride must be at least 1")


class TraceRecord(NamedTuple):
    k: int
    error: Optional[float]
    residual: float
    flops: int


@dataclass
class IterateTrace:
    records: list
    terminated_by: str
    final_iterate: np.ndarray
    indices: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.terminated_by == REACHED

    @property
    def iterations(self) -> int:
        return self.records[-1].k

    @property
    def flops(self) -> int:
        return self.records[-1].flops

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records], dtype=float)


def project_row(x, a, beta, lam=1.0):
    """Move ``x`` towards the hyperplane ``<a, y> = beta``.

    Returns ``x + lam * (beta - <a, x>) / ||a||^2 * a``; ``lam = 1`` is the
    orthogonal projection.
    """
    if not 0 < lam < 2:
        raise ParameterError(f"relaxation must lie in (0, 2), got {lam}")
    x = np.asarray(x, dtype=np.complex128)
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != x.shape:
        raise DimensionError(f"row of shape {a.shape} does not match iterate {x.shape}")
    nrm = float(np.vdot(a, a).real)
    if nrm == 0.0:
        raise DegenerateRowError(None, "cannot project onto a zero row")
    return x + (lam * (beta - np.vdot(a, x)) / nrm) * a


def _start(system, opts):
    if opts.x0 is None:
        return np.zeros(system.n, dtype=np.complex128)
    return np.array(as_vector(opts.x0, system.n))


def _stop_scale(system):
    """Stopping is on absolute error when x_true is known, else on relative residual."""
    return None if system.x_true is not None else max(float(np.linalg.norm(system.b)), 1e-300)


def _record(system, x, k, flops):
    err = None if system.x_true is None else float(np.linalg.norm(x - system.x_true))
    res = float(np.linalg.norm(system.A @ x - system.b))
    return TraceRecord(k, err, res, flops)


def _kaczmarz(system, opts, next_indices, lam, keep_indices=False):
    A = system.A
    m, n = A.shape
    normals = A.conj()
    norms = row_norms_sq(A)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise DegenerateRowError(int(zero[0]))
    b = np.asarray(system.b)
    x = _start(system, opts)
    x_true = system.x_true
    eps = opts.target_error
    bscale = _stop_scale(system)
    stride = opts.trace_stride or m
    step = kaczmarz_step_flops(n)
    coef = lam / norms

    records = [_record(system, x, 0, 0)]
    used = [] if keep_indices else None
    k = 0
    done = records[0].error <= eps if x_true is not None else records[0].residual <= eps * bscale
    while not done and k < opts.max_projections:
        chunk = next_indices(k, min(_DRAW_CHUNK, opts.max_projections - k))
        if used is not None:
            used.append(chunk)
        for pos, i in enumerate(chunk):
            a = normals[i]
            x += (coef[i] * (b[i] - A[i] @ x)) * a
            k += 1
            if x_true is not None:
                d = x - x_true
                if np.vdot(d, d).real <= eps * eps:
                    done = True
            at_stride = k % stride == 0
            if at_stride or done:
                rec = _record(system, x, k, k * step)
                if x_true is None and rec.residual <= eps * bscale:
                    done = True
                records.append(rec)
            if done:
                if used is not None:
                    used[-1] = chunk[:pos + 1]
                break
    if records[-1].k != k:
        records.append(_record(system, x, k, k * step))
    if used is not None:
        used = np.concatenate(used) if used else np.empty(0, dtype=int)
    x.flags.writeable = False
    return IterateTrace(records, REACHED if done else EXHAUSTED, x, used)


def kaczmarz_cyclic(system: LinearSystem, opts: SolverOptions = SolverOptions()) -> IterateTrace:
    """Classical Kaczmarz: rows ``0, 1, ..., m-1, 0, 1, ...`` in order."""
    m = system.m
    lam = 1.0 if opts.relaxation is None else opts.relaxation
    return _kaczmarz(system, opts, lambda k, size: np.arange(k, k + size) % m, lam)


def kaczmarz_randomized(
    system: LinearSystem,
    opts: SolverOptions = SolverOptions(),
    weighting: str = "squared_norm",
    *,
    keep_indices: bool = False,
) -> IterateTrace:
    """Randomized Kaczmarz.

    With ``weighting="squared_norm"`` row ``j`` is drawn with probability
    ``||a_j||^2 / ||A||_F^2``; ``"uniform"`` draws every row with equal
    probability.  ``opts.relaxation`` (default 1) scales every correction.
    Set ``keep_indices`` to store the drawn row sequence on the trace.
    """
    if weighting == "squared_norm":
        dist = build_row_distribution(system.A)
    elif weighting == "uniform":
        dist = uniform_distribution(system.m)
    else:
        raise ParameterError(f"unknown weighting {weighting!r}")
    rng = RngStream(opts.seed)
    lam = 1.0 if opts.relaxation is None else opts.relaxation
    return _kaczmarz(
        system, opts, lambda k, size: sample_indices(dist, rng, size), lam, keep_indices
    )


def kaczmarz_relaxed(system: LinearSystem, opts: SolverOptions = SolverOptions(), **kwargs) -> IterateTrace:
    """Squared-norm randomized Kaczmarz with a constant relaxation ``lam``.

    ``opts.relaxation`` defaults to ``1 + n / m``.  Convergence on consistent
    systems requires ``0 < lam < 2``.
    """
    if opts.relaxation is None:
        opts = replace(opts, relaxation=1.0 + system.n / system.m)
    return kaczmarz_randomized(system, opts, "squared_norm", **kwargs)


def cgls(
    system: LinearSystem,
    opts: SolverOptions = SolverOptions(),
    callback: Optional[Callable] = None,
) -> IterateTrace:
    """Conjugate gradients on ``A^* A x = A^* b`` without forming ``A^* A``.

    Each iteration applies ``A`` once and ``A^*`` once.  ``callback(k, x, s)``
    is called after iteration ``k`` (and for ``k = 0``) with the iterate and
    the normal-equation residual ``s = A^*(b - A x)``.

    Raises
    ------
    NumericalFailure
        If the search direction is annihilated by ``A`` before convergence.
    """
    A = system.A
    m, n = A.shape
    AH = A.conj().T
    x = _start(system, opts)
    x_true = system.x_true
    eps = opts.target_error
    bscale = _stop_scale(system)
    stride = opts.trace_stride or 1
    max_it = opts.max_iterations if opts.max_iterations is not None else 20 * n
    step = cgls_iteration_flops(m, n)

    r = np.asarray(system.b) - A @ x
    s = AH @ r
    p = s.copy()
    gamma = float(np.vdot(s, s).real)
    if callback is not None:
        callback(0, x.copy(), s.copy())

    def reached(rec):
        if x_true is not None:
            return rec.error <= eps
        return rec.residual <= eps * bscale

    records = [_record(system, x, 0, 0)]
    done = reached(records[0])
    k = 0
    while not done and k < max_it:
        if gamma == 0.0:
            # exact solution of the normal equations
            break
        q = A @ p
        delta = float(np.vdot(q, q).real)
        if delta == 0.0:
            raise NumericalFailure(f"CGLS breakdown at iteration {k}: A p = 0 with ||s||^2 = {gamma:.3e}")
        alpha = gamma / delta
        x += alpha * p
        r -= alpha * q
        s = AH @ r
        gamma_new = float(np.vdot(s, s).real)
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new
        k += 1
        if callback is not None:
            callback(k, x.copy(), s.copy())
        rec = _record(system, x, k, k * step)
        done = reached(rec)
        if done or k % stride == 0:
            records.append(rec)
    if records[-1].k != k:
        records.append(_record(system, x, k, k * step))
    x.flags.writeable = False
    return IterateTrace(records=records, terminated_by=REACHED if done else EXHAUSTED, final_iterate=x)

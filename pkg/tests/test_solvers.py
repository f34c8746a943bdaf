import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mc_squared_errors, mean_and_se
from rkaczmarz import (
    DegenerateRowError,
    DimensionError,
    LinearSystem,
    NumericalFailure,
    ParameterError,
    RngStream,
    SolverOptions,
    cgls,
    condition_numbers,
    kaczmarz_cyclic,
    kaczmarz_randomized,
    kaczmarz_relaxed,
    project_row,
)
from rkaczmarz.problems import clustered_spectrum_system, gaussian_system
from rkaczmarz.solvers import EXHAUSTED, REACHED, cgls_iteration_flops, flop_cost, kaczmarz_step_flops
from rkaczmarz.theory import exact_expected_error


def complex_system(seed, m, n):
    gen = np.random.default_rng(seed)
    A = gen.standard_normal((m, n)) + 1j * gen.standard_normal((m, n))
    x = gen.standard_normal(n) + 1j * gen.standard_normal(n)
    return LinearSystem(A, A @ x, x)


# project_row ---------------------------------------------------------------

def test_projection_examples():
    np.testing.assert_array_equal(project_row([0, 0], [1, 0], 1.0), [1, 0])
    np.testing.assert_array_equal(project_row([0, 0], [1, 0], 1.0, 1.5), [1.5, 0])
    x = np.array([2.0, 3.0])
    np.testing.assert_array_equal(project_row(x, [1.0, 1.0], 5.0), x)


def test_projection_errors():
    with pytest.raises(DegenerateRowError):
        project_row([1.0, 2.0], [0.0, 0.0], 1.0)
    with pytest.raises(ParameterError):
        project_row([1.0, 2.0], [1.0, 0.0], 1.0, 2.0)
    with pytest.raises(DimensionError):
        project_row([1.0, 2.0], [1.0, 0.0, 0.0], 1.0)


finite = st.floats(-1e3, 1e3, allow_nan=False)
cplx = st.builds(complex, finite, finite)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.lists(cplx, min_size=n, max_size=n),
                                                      st.lists(cplx, min_size=n, max_size=n))), cplx)
def test_projection_lands_on_hyperplane(xa, beta):
    x, a = (np.array(v, dtype=complex) for v in xa)
    if np.linalg.norm(a) < 1e-3:
        return
    y = project_row(x, a, beta)
    # rounding is relative to the input size, so ||x|| joins the scale
    scale = np.linalg.norm(a) * (np.linalg.norm(y) + np.linalg.norm(x)) + abs(beta)
    assert abs(np.vdot(a, y) - beta) <= 1e-12 * scale
    # the update is a multiple of the row
    d = y - x
    assert np.linalg.norm(d - np.vdot(a, d) / np.vdot(a, a) * a) <= 1e-12 * (np.linalg.norm(d) + np.linalg.norm(x))


# flop model ----------------------------------------------------------------

def test_flop_counts():
    assert kaczmarz_step_flops(100) == 1608
    assert flop_cost("kaczmarz_step", 100) == 1608
    assert flop_cost("cgls_iteration", 300, 100) == cgls_iteration_flops(300, 100) == 16 * 300 * 100 + 16 * 400 + 20
    assert cgls_iteration_flops(300, 100) / kaczmarz_step_flops(100) == pytest.approx(300, rel=0.02)
    with pytest.raises(ParameterError):
        flop_cost("cgls_iteration", 0, 3)


def test_traces_use_the_flop_model(rng):
    system = gaussian_system(30, 10, rng)
    tr = kaczmarz_randomized(system, SolverOptions(max_projections=100, target_error=1e-300))
    assert all(r.flops == r.k * kaczmarz_step_flops(10) for r in tr.records)
    tr = cgls(system, SolverOptions(max_iterations=4, target_error=1e-300))
    assert [r.flops for r in tr.records] == [k * cgls_iteration_flops(30, 10) for k in range(5)]


# systems and options -------------------------------------------------------

def test_inconsistent_system_rejected():
    with pytest.raises(ParameterError):
        LinearSystem(np.eye(2), np.array([1.0, 1.0]), np.array([1.0, 0.0]))


def test_option_validation():
    with pytest.raises(ParameterError):
        SolverOptions(target_error=0.0)
    with pytest.raises(ParameterError):
        SolverOptions(relaxation=2.5)


# Kaczmarz variants ---------------------------------------------------------

def test_identity_cyclic_solves_in_n_projections():
    x = np.array([1.0, -2.0, 3.0])
    tr = kaczmarz_cyclic(LinearSystem(np.eye(3), x, x), SolverOptions(target_error=1e-15, trace_stride=1))
    assert tr.terminated_by == REACHED
    assert tr.iterations == 3
    np.testing.assert_allclose(tr.final_iterate, x)


@pytest.mark.parametrize("theta", [0.3, 0.9, 1.4])
def test_cyclic_two_lines_contract_by_cos_squared(theta):
    A = np.array([[1.0, 0.0], [math.cos(theta), math.sin(theta)]])
    x = np.array([0.7, -1.3])
    opts = SolverOptions(x0=np.array([5.0, 4.0]), max_projections=12, target_error=1e-300, trace_stride=1)
    err = kaczmarz_cyclic(LinearSystem(A, A @ x, x), opts).column("error")
    np.testing.assert_allclose(err[3::2] / err[1:-2:2], math.cos(theta) ** 2, rtol=1e-9)


def test_trace_structure(rng):
    system = gaussian_system(40, 10, rng)
    tr = kaczmarz_randomized(system, SolverOptions(max_projections=1000, target_error=1e-300))
    ks = tr.column("k")
    assert ks[0] == 0 and np.all(np.diff(ks) > 0)
    assert np.all(np.diff(tr.column("flops")) >= 0)
    assert list(ks[:4]) == [0, 40, 80, 120]
    assert tr.terminated_by == EXHAUSTED and tr.iterations == 1000


def test_unknown_solution_stops_on_relative_residual(rng):
    s = gaussian_system(40, 10, rng)
    tr = kaczmarz_randomized(LinearSystem(s.A, s.b), SolverOptions(target_error=1e-8))
    assert tr.converged
    assert tr.records[-1].error is None
    assert tr.records[-1].residual <= 1e-8 * np.linalg.norm(s.b)


def test_equal_row_norms_give_identical_sequences():
    signs = np.where(np.random.default_rng(0).random((12, 4)) < 0.5, -1.0, 1.0)
    x = np.arange(4.0)
    system = LinearSystem(signs, signs @ x, x)
    opts = SolverOptions(max_projections=500, target_error=1e-300, seed=3)
    a = kaczmarz_randomized(system, opts, "squared_norm", keep_indices=True)
    b = kaczmarz_randomized(system, opts, "uniform", keep_indices=True)
    np.testing.assert_array_equal(a.indices, b.indices)
    assert a.records == b.records


def test_seed_determinism(rng):
    system = complex_system(1, 30, 8)
    opts = SolverOptions(target_error=1e-10, seed=17)
    a, b = kaczmarz_randomized(system, opts), kaczmarz_randomized(system, opts)
    assert a.records == b.records
    np.testing.assert_array_equal(a.final_iterate, b.final_iterate)
    c = kaczmarz_randomized(system, SolverOptions(target_error=1e-10, seed=18))
    assert a.records != c.records


def test_orthogonal_decomposition_per_step():
    system = complex_system(2, 25, 6)
    opts = SolverOptions(max_projections=200, target_error=1e-300, seed=4)
    idx = kaczmarz_randomized(system, opts, keep_indices=True).indices
    x = np.zeros(6, dtype=complex)
    e0_sq = np.linalg.norm(system.x_true) ** 2
    for j in idx:
        y = project_row(x, system.A[j].conj(), system.b[j])
        lhs = np.linalg.norm(y - system.x_true) ** 2
        rhs = np.linalg.norm(x - system.x_true) ** 2 - np.linalg.norm(x - y) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * e0_sq)
        x = y


def test_replayed_indices_reproduce_final_iterate():
    system = complex_system(3, 20, 5)
    tr = kaczmarz_randomized(system, SolverOptions(max_projections=150, target_error=1e-300, seed=1), keep_indices=True)
    x = np.zeros(5, dtype=complex)
    for j in tr.indices:
        x = project_row(x, system.A[j].conj(), system.b[j])
    np.testing.assert_allclose(x, tr.final_iterate, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("lam", [0.4, 1.0, 1.5, 1.9])
def test_error_is_monotone(lam):
    system = complex_system(4, 30, 8)
    opts = SolverOptions(max_projections=600, target_error=1e-300, trace_stride=1, relaxation=lam, seed=2)
    err = kaczmarz_randomized(system, opts).column("error")
    # slack at the scale of the initial error: the iterate reaches the rounding floor
    assert np.all(np.diff(err) <= 1e-12 * err[0])


@pytest.mark.parametrize("seed", range(5))
def test_one_step_expectation_is_contracted(seed):
    system = complex_system(10 + seed, 15, 4)
    x0 = RngStream(seed).standard_normal(4)
    e1 = exact_expected_error(system, x0, 1)
    kappa = condition_numbers(system.A).kappa
    assert e1[1] <= (1 - kappa**-2) * e1[0] * (1 + 1e-10)


def test_monte_carlo_matches_enumeration():
    gen = np.random.default_rng(5)
    A = gen.standard_normal((3, 2))
    x = gen.standard_normal(2)
    system = LinearSystem(A, A @ x, x)
    exact = np.array(exact_expected_error(system, np.zeros(2), 6))
    mean, se = mean_and_se(mc_squared_errors(system, np.zeros(2), 6, range(4000)))
    assert np.all(np.abs(mean - exact) <= 3 * se + 1e-12)


def test_relaxed_default_and_reduction(rng):
    system = gaussian_system(60, 20, rng)
    base = SolverOptions(max_projections=2000, target_error=1e-300, seed=6)
    plain = kaczmarz_randomized(system, base)
    one = kaczmarz_relaxed(system, SolverOptions(max_projections=2000, target_error=1e-300, seed=6, relaxation=1.0))
    assert one.records == plain.records
    default = kaczmarz_relaxed(system, base, keep_indices=True)
    lam = 1 + 20 / 60
    x = np.zeros(20, dtype=complex)
    for j in default.indices[:50]:
        x = project_row(x, system.A[j].conj(), system.b[j], lam)
    replay = kaczmarz_relaxed(system, SolverOptions(max_projections=50, target_error=1e-300, seed=6))
    np.testing.assert_allclose(replay.final_iterate, x, rtol=1e-12)


def test_relaxation_out_of_range():
    with pytest.raises(ParameterError):
        kaczmarz_relaxed(complex_system(0, 4, 2), SolverOptions(relaxation=2.5))


@pytest.mark.slow
def test_relaxation_helps_on_gaussian_300x100():
    flops = {1.0: [], 1 + 1 / 3: []}
    for t in range(20):
        system = gaussian_system(300, 100, RngStream(t))
        for lam in flops:
            tr = kaczmarz_randomized(system, SolverOptions(target_error=1e-10, relaxation=lam, seed=t))
            assert tr.converged
            flops[lam].append(tr.flops)
    assert np.mean(flops[1 + 1 / 3]) <= np.mean(flops[1.0])


def test_cyclic_and_randomized_reject_zero_rows():
    A = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    system = LinearSystem(A, np.array([1.0, 0.0, 1.0]), np.array([1.0, 1.0]))
    for solver in (kaczmarz_cyclic, kaczmarz_randomized):
        with pytest.raises(DegenerateRowError):
            solver(system)


# CGLS ----------------------------------------------------------------------

def test_cgls_identity_one_iteration():
    x = np.array([1.0, 2.0, -1.0])
    tr = cgls(LinearSystem(np.eye(3), x, x), SolverOptions(target_error=1e-14))
    assert tr.converged and tr.iterations == 1


def test_cgls_mild_cluster_two_iterations():
    for t in range(10):
        system = clustered_spectrum_system(100, 1e-2, RngStream(t))
        scale = np.linalg.norm(system.x_true)
        tr = cgls(system, SolverOptions(target_error=1e-6 * scale))
        assert tr.converged and tr.iterations <= 2


def test_cgls_finite_termination(rng):
    for system in (gaussian_system(80, 30, rng), complex_system(7, 50, 20)):
        n = system.n
        tr = cgls(LinearSystem(system.A, system.b), SolverOptions(target_error=1e-10, max_iterations=n + 5))
        assert tr.converged
        assert tr.records[-1].residual <= 1e-10 * np.linalg.norm(system.b)


@pytest.mark.parametrize("shape", [(300, 100), (120, 100), (200, 80)])
def test_cgls_residuals_are_orthogonal(shape):
    system = complex_system(8, *shape)
    seen = []
    cgls(system, SolverOptions(target_error=1e-300, max_iterations=25), lambda k, x, s: seen.append(s))
    S = np.array(seen[:25])
    norms = np.linalg.norm(S, axis=1)
    G = np.abs(S.conj() @ S.T) / np.outer(norms, norms)
    assert np.max(G - np.diag(np.diag(G))) <= 1e-8


def test_cgls_rank_deficient_direction_is_not_excited():
    A = np.array([[1.0, 0.0], [1.0, 0.0]])
    tr = cgls(LinearSystem(A, np.array([1.0, 1.0])), SolverOptions(target_error=1e-12))
    assert tr.converged


def test_cgls_breakdown_is_reported():
    # A^* r is nonzero but A annihilates it: only possible through rounding,
    # so force it with an entry whose square underflows
    A = np.array([[1e-160]])
    with pytest.raises(NumericalFailure):
        cgls(LinearSystem(A, np.array([1.0])), SolverOptions(target_error=1e-300))

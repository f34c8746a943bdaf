import numpy as np
import pytest
from scipy import stats

from rkaczmarz import DegenerateRowError, ParameterError, RngStream, WeightedIndexDistribution, derive_stream
from rkaczmarz.problems import trig_system, uniform_sorted_nodes
from rkaczmarz.randsrc import build_row_distribution, sample_index, sample_indices, uniform_distribution


def test_row_distribution_probabilities():
    A = np.array([[1.0, 0.0], [1.0, np.sqrt(2.0)]])
    dist = build_row_distribution(A)
    np.testing.assert_allclose(dist.probabilities, [0.25, 0.75], rtol=1e-15)
    assert dist.total == pytest.approx(4.0)
    assert dist.cumulative[-1] == dist.total


def test_unit_rows_give_uniform_distribution():
    dist = build_row_distribution(np.eye(5)[[0, 1, 2, 3, 4, 0]])
    np.testing.assert_array_equal(dist.probabilities, np.full(6, 1 / 6))


def test_trig_rows_are_drawn_with_their_weights(rng):
    inst = trig_system(3, uniform_sorted_nodes(20, rng), np.zeros(7))
    np.testing.assert_allclose(build_row_distribution(inst.system.A).probabilities, inst.weights, rtol=1e-12)


def test_zero_row_is_named():
    with pytest.raises(DegenerateRowError) as err:
        build_row_distribution(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))
    assert err.value.row == 1


def test_bad_weights_rejected():
    with pytest.raises(ParameterError):
        WeightedIndexDistribution.from_weights([])
    with pytest.raises(ParameterError):
        WeightedIndexDistribution.from_weights([1.0, np.inf])


def test_single_index_always_zero():
    dist = uniform_distribution(1)
    assert set(sample_indices(dist, RngStream(3), 1000)) == {0}
    assert sample_index(dist, RngStream(3)) == 0


def test_frequency_of_heavy_index():
    dist = WeightedIndexDistribution.from_weights([1.0, 3.0])
    draws = sample_indices(dist, RngStream(11), 10**6)
    assert abs(draws.mean() - 0.75) <= 0.002


@pytest.mark.parametrize("weights", [[1.0, 2.0, 3.0], [0.5, 0.1, 4.0, 1.0, 1.0, 2.5, 0.01, 7.0], [5.0] * 8])
def test_chi_square_goodness_of_fit(weights):
    dist = WeightedIndexDistribution.from_weights(weights)
    np.testing.assert_allclose(np.diff(np.concatenate([[0.0], dist.cumulative])) / dist.total,
                               np.array(weights) / sum(weights), rtol=1e-12)
    draws = sample_indices(dist, RngStream(5), 10**6)
    counts = np.bincount(draws, minlength=len(weights))
    _, p = stats.chisquare(counts, 10**6 * dist.probabilities)
    assert p > 1e-4


def test_sample_index_matches_batched_draws():
    dist = WeightedIndexDistribution.from_weights([1.0, 2.0, 3.0, 4.0])
    rng_a, rng_b = RngStream(9), RngStream(9)
    singles = [sample_index(dist, rng_a) for _ in range(50)]
    np.testing.assert_array_equal(singles, sample_indices(dist, rng_b, 50))


def test_same_seed_same_draws():
    np.testing.assert_array_equal(RngStream(42).uniform01(1000), RngStream(42).uniform01(1000))
    np.testing.assert_array_equal(RngStream(42).standard_normal(100), RngStream(42).standard_normal(100))


def test_draws_do_not_depend_on_request_sizes():
    a = RngStream(8)
    pieces = np.concatenate([a.uniform01(3), a.uniform01(5000), [a.uniform01()], a.uniform01(10)])
    np.testing.assert_array_equal(pieces, RngStream(8).uniform01(5014))


def test_normal_moments():
    z = RngStream(1).standard_normal(10**6)
    assert abs(z.mean()) <= 0.005
    assert abs(z.var() - 1.0) <= 0.01


def test_normals_pass_ks():
    assert stats.kstest(RngStream(2).standard_normal(10**5), "norm").pvalue > 1e-4


def test_uniform_range_and_ks():
    u = RngStream(3).uniform01(10**5)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert stats.kstest(u, "uniform").statistic < 0.01


def test_seed_range():
    with pytest.raises(ParameterError):
        RngStream(-1)
    with pytest.raises(ParameterError):
        RngStream(2**64)
    assert RngStream(2**64 - 1).seed == 2**64 - 1


def test_derived_streams():
    np.testing.assert_array_equal(derive_stream(7, 0).uniform01(64), derive_stream(7, 0).uniform01(64))
    assert np.all(derive_stream(7, 0).uniform01(64) != derive_stream(7, 1).uniform01(64))
    assert derive_stream(7, 3).key == (3,)
    with pytest.raises(ParameterError):
        derive_stream(7, -1)


def test_derived_streams_are_uncorrelated():
    firsts = np.array([derive_stream(7, t).uniform01(2) for t in range(1000)])
    assert abs(np.corrcoef(firsts[:-1, 0], firsts[1:, 0])[0, 1]) < 0.1
    assert abs(np.corrcoef(firsts[:, 0], firsts[:, 1])[0, 1]) < 0.1


def test_substreams_are_keyed_and_independent_of_parent_draws():
    parent = RngStream(5)
    before = parent.substream(2).uniform01(8)
    parent.uniform01(100)
    np.testing.assert_array_equal(before, parent.substream(2).uniform01(8))
    assert np.all(before != parent.substream(3).uniform01(8))

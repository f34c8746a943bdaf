"""
Seeded random streams and weighted row-index sampling.

Every random quantity in the package is derived from one stream of uniform
variates in ``[0, 1)``.  The stream is NumPy's PCG64 generator (128-bit
state, period 2**128) seeded through a :class:`numpy.random.SeedSequence`,
so a seed fixes the sequence bit for bit.  Normals are produced from the
same uniforms by the Box-Muller transform (cosine branch only, two uniforms
per normal), which keeps every draw a pure function of the uniform sequence.

Trial streams are derived with ``SeedSequence(entropy=seed,
spawn_key=(trial,))``; the SeedSequence hash mixes the key into the
generator state so that neighbouring trials get unrelated streams.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRowError, ParameterError
from .matcore import row_norms_sq

__all__ = [
    "RngStream",
    "WeightedIndexDistribution",
    "build_row_distribution",
    "derive_stream",
    "sample_index",
    "sample_indices",
    "uniform_distribution",
]

_BLOCK = 4096


class RngStream:
    """Single-owner stream of uniforms; not safe to share between threads.

    Parameters
    ----------
    seed : int or numpy.random.SeedSequence
        Non-negative integer below 2**64, or a prepared seed sequence.
    """

    def __init__(self, seed=0):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            seed = int(seed)
            if not 0 <= seed < 2**64:
                raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
            self._seq = np.random.SeedSequence(seed)
        self._gen = np.random.Generator(np.random.PCG64(self._seq))
        self._buf = np.empty(0)
        self._pos = 0

    @property
    def seed(self):
        return self._seq.entropy

    @property
    def key(self):
        return tuple(self._seq.spawn_key)

    def substream(self, key: int) -> "RngStream":
        """Independent child stream identified by ``key`` (does not consume draws)."""
        return RngStream(
            np.random.SeedSequence(self._seq.entropy, spawn_key=self._seq.spawn_key + (int(key),))
        )

    def _take(self, size):
        out = np.empty(size)
        filled = 0
        while filled < size:
            if self._pos == len(self._buf):
                self._buf = self._gen.random(max(_BLOCK, size - filled))
                self._pos = 0
            take = min(size - filled, len(self._buf) - self._pos)
            out[filled:filled + take] = self._buf[self._pos:self._pos + take]
            self._pos += take
            filled += take
        return out

    def uniform01(self, size=None):
        """Uniform variate(s) in ``[0, 1)``."""
        if size is None:
            return float(self._take(1)[0])
        return self._take(int(size))

    def standard_normal(self, size=None):
        count = 1 if size is None else int(np.prod(size))
        u = self._take(2 * count)
        # 1 - u lies in (0, 1], so the logarithm is finite
        z = np.sqrt(-2.0 * np.log1p(-u[0::2])) * np.cos(2.0 * np.pi * u[1::2])
        if size is None:
            return float(z[0])
        return z.reshape(size)


def derive_stream(master_seed: int, trial_index: int) -> RngStream:
    """Stream for trial ``trial_index`` of an experiment seeded with ``master_seed``."""
    if trial_index < 0:
        raise ParameterError(f"trial index must be non-negative, got {trial_index}")
    return RngStream(np.random.SeedSequence(int(master_seed), spawn_key=(int(trial_index),)))


@dataclass(frozen=True)
class WeightedIndexDistribution:
    """Distribution over ``range(m)`` with ``P(j) = weights[j] / total``.

    Weights are kept as given; nothing is renormalized, so probabilities
    are exact ratios of the stored numbers.
    """

    weights: np.ndarray
    cumulative: np.ndarray
    total: float

    @classmethod
    def from_weights(cls, weights) -> "WeightedIndexDistribution":
        w = np.array(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ParameterError("weights must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(w)):
            raise ParameterError("weights must be finite")
        bad = np.flatnonzero(w <= 0)
        if bad.size:
            raise DegenerateRowError(int(bad[0]), f"weight {bad[0]} is not positive ({w[bad[0]]!r})")
        cum = np.cumsum(w)
        w.flags.writeable = False
        cum.flags.writeable = False
        return cls(weights=w, cumulative=cum, total=float(cum[-1]))

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights / self.total


def build_row_distribution(A) -> WeightedIndexDistribution:
    """Rows weighted by their squared Euclidean norm."""
    w = row_norms_sq(A)
    zero = np.flatnonzero(w == 0)
    if zero.size:
        raise DegenerateRowError(int(zero[0]))
    return WeightedIndexDistribution.from_weights(w)


def uniform_distribution(m: int) -> WeightedIndexDistribution:
    return WeightedIndexDistribution.from_weights(np.ones(m))


def sample_indices(dist: WeightedIndexDistribution, rng: RngStream, size: int) -> np.ndarray:
    """``size`` independent draws; equivalent to ``size`` calls of :func:`sample_index`."""
    u = rng.uniform01(size) * dist.total
    j = np.searchsorted(dist.cumulative, u, side="right")
    # u * total can round up to total itself
    return np.minimum(j, dist.m - 1)


def sample_index(dist: WeightedIndexDistribution, rng: RngStream) -> int:
    """First ``j`` with ``cumulative[j] > u * total`` for a fresh uniform ``u``."""
    return int(sample_indices(dist, rng, 1)[0])

"""Tests for probability containers and random streams."""

import numpy as np
import pytest
from scipy import stats

from edgespec.core import (
    RandomStream,
    SessionConfig,
    SparseDistribution,
    StreamLabel,
    StreamSeeds,
    StreamSet,
    as_f32,
    uniform,
    validate_dense,
)
from edgespec.exceptions import DistributionError, NegativeMass, NotNormalized


class TestValidateDense:
    """Test dense distribution validation."""

    def test_accepts_normalized_vector(self):
        """A normalized vector is stored as frozen float32."""
        dist = validate_dense([0.25, 0.25, 0.5])
        assert dist.V == 3
        assert dist.probs.dtype == np.float32
        assert dist[2] == 0.5

    def test_frozen_storage(self):
        dist = validate_dense([0.5, 0.5])
        with pytest.raises(ValueError):
            dist.probs[0] = 1.0

    def test_negative_entry(self):
        """Negative mass is rejected."""
        with pytest.raises(NegativeMass):
            validate_dense([1.2, -0.2])

    def test_not_normalized(self):
        """Mass far from one is rejected."""
        with pytest.raises(NotNormalized):
            validate_dense([0.5, 0.4])

    def test_tolerance(self):
        """Sums within 1e-6 of one are accepted."""
        validate_dense([0.5, 0.5 + 5e-7])
        with pytest.raises(NotNormalized):
            validate_dense([0.5, 0.5 + 1e-5])

    def test_length_check(self):
        """The vector length must equal V."""
        with pytest.raises(DistributionError):
            validate_dense([0.5, 0.5], V=3)

    def test_random_vectors_satisfy_invariants(self):
        """Any accepted vector is non-negative and sums to one."""
        rng = np.random.default_rng(0)
        for _ in range(200):
            V = int(rng.integers(1, 300))
            raw = rng.random(V)
            dist = validate_dense(raw / raw.sum())
            assert np.all(dist.probs >= 0)
            assert abs(float(dist.probs.sum(dtype=np.float64)) - 1.0) <= 1e-6

    def test_uniform(self):
        dist = uniform(8)
        assert np.allclose(dist.probs, 0.125)


class TestSparseDistribution:
    """Test Top-K slices."""

    def test_from_pairs_rounds_to_f32(self):
        """Probabilities are rounded to float32 on construction."""
        sparse = SparseDistribution.from_pairs([(3, 0.1), (1, 0.05)])
        assert sparse.probs[0] == as_f32(0.1)
        assert sparse.K == 2
        assert sparse.prob(1) == as_f32(0.05)
        assert sparse.prob(7) == 0.0

    def test_duplicate_ids(self):
        """Token ids in a slice are unique."""
        with pytest.raises(DistributionError):
            SparseDistribution(ids=(1, 1), probs=(0.3, 0.2))

    def test_must_be_sorted(self):
        """Probabilities must be non-increasing."""
        with pytest.raises(DistributionError):
            SparseDistribution(ids=(1, 2), probs=(0.2, 0.3))

    def test_to_dense(self):
        """Missing ids become zeros."""
        sparse = SparseDistribution(ids=(2, 0), probs=(0.5, 0.25))
        dense = sparse.to_dense(4)
        assert dense.tolist() == [0.25, 0.0, 0.5, 0.0]


class TestRandomStream:
    """Test deterministic labelled streams."""

    def test_reproducible(self):
        """Same seed and label give the same sequence."""
        a = RandomStream(42, StreamLabel.CLOUD_ACCEPT)
        b = RandomStream(42, StreamLabel.CLOUD_ACCEPT)
        assert [a.draw_uniform() for _ in range(10)] == [b.draw_uniform() for _ in range(10)]

    def test_labels_are_independent(self):
        """Two labels under one seed pass a two-sample KS test and are uncorrelated."""
        x = RandomStream(42, StreamLabel.EDGE_DRAFT).draw_many(20_000)
        y = RandomStream(42, StreamLabel.EDGE_RESAMPLE).draw_many(20_000)
        assert x.tolist() != y.tolist()
        assert stats.ks_2samp(x, y).pvalue > 0.01
        assert abs(np.corrcoef(x, y)[0, 1]) < 0.05

    def test_random_access_matches_sequential(self):
        """uniform_at(i) equals the i-th sequential draw across block edges."""
        stream = RandomStream(7, StreamLabel.EDGE_DRAFT)
        at = [stream.uniform_at(i) for i in (5000, 3, 4095, 4096)]
        seq = stream.draw_many(5001)
        assert at == [seq[5000], seq[3], seq[4095], seq[4096]]

    def test_draw_many_spans_blocks_from_cursor(self):
        """Batched draws starting mid-block match indexed access."""
        stream = RandomStream(11, StreamLabel.CLOUD_ACCEPT)
        stream.draw_many(4000)
        chunk = stream.draw_many(9000)
        assert stream.cursor == 13_000
        assert chunk.tolist() == [stream.uniform_at(i) for i in range(4000, 13_000)]
        tail = stream.draw_many(3)
        assert tail.tolist() == [stream.uniform_at(i) for i in range(13_000, 13_003)]

    def test_draw_many_edge_counts(self):
        """Zero draws are empty and negative counts are refused."""
        stream = RandomStream(11, StreamLabel.NETWORK)
        assert stream.draw_many(0).size == 0
        assert stream.cursor == 0
        with pytest.raises(ValueError):
            stream.draw_many(-1)

    def test_uniform_at_does_not_advance(self):
        """Indexed access leaves the cursor alone."""
        stream = RandomStream(1, StreamLabel.NETWORK)
        stream.uniform_at(100)
        assert stream.cursor == 0

    def test_range_and_moments(self):
        """Draws lie in [0, 1) with mean one half."""
        values = RandomStream(3, StreamLabel.CLOUD_ACCEPT).draw_many(100_000)
        assert values.min() >= 0.0 and values.max() < 1.0
        assert abs(values.mean() - 0.5) < 0.01

    def test_normal_draws(self):
        """Inverse-CDF normals have the requested spread."""
        stream = RandomStream(5, StreamLabel.NETWORK)
        draws = np.array([stream.draw_normal(2.0) for _ in range(20_000)])
        assert abs(draws.mean()) < 0.1
        assert abs(draws.std() - 2.0) < 0.1

    def test_stream_set_uses_seeds(self):
        streams = StreamSet(StreamSeeds.from_base(9))
        assert streams.edge_draft.seed == 9
        assert streams.network.label is StreamLabel.NETWORK


class TestSessionConfig:
    """Test session parameter validation."""

    def test_defaults(self):
        """gamma and K default to 4 and 10."""
        config = SessionConfig(V=16)
        assert config.gamma == 4 and config.K == 10

    @pytest.mark.parametrize(
        "kwargs", [{"V": 1}, {"V": 16, "gamma": 0}, {"V": 16, "K": 17}, {"V": 16, "K": 0}]
    )
    def test_invalid(self, kwargs):
        """Out-of-range parameters are rejected."""
        with pytest.raises(ValueError):
            SessionConfig(**kwargs)

"""Tests for toy sequence models and aligned pairs."""

import numpy as np
import pytest

from edgespec.core import uniform, validate_dense
from edgespec.models import (
    AlignedPair,
    TableModel,
    exact_alpha,
    make_aligned_pair,
    make_constant_alpha_pair,
    measure_alpha,
)


@pytest.fixture
def order2_table():
    """V=3, m=2 table with a single explicit row."""
    row = validate_dense([0.7, 0.2, 0.1])
    return TableModel(V=3, m=2, rows={(1, 2): row})


class TestTableModel:
    """Test table lookups and fallbacks."""

    def test_row_lookup(self, order2_table):
        """An explicit row is keyed by the last m tokens."""
        dist = order2_table.next_distribution([0, 1, 2])
        assert dist[0] == pytest.approx(0.7)

    def test_short_context_uses_default(self, order2_table):
        """Contexts shorter than m fall back to the default row."""
        assert order2_table.next_distribution([1]) == uniform(3)

    def test_missing_row_uses_default(self, order2_table):
        """Contexts without a row use the default."""
        assert order2_table.next_distribution([2, 2]) == uniform(3)

    def test_token_out_of_vocabulary(self, order2_table):
        """Context tokens must lie in the vocabulary."""
        with pytest.raises(ValueError):
            order2_table.next_distribution([1, 5])

    def test_wrong_context_order(self):
        """Row keys must have exactly m tokens."""
        with pytest.raises(ValueError):
            TableModel(V=2, m=2, rows={(0,): validate_dense([0.5, 0.5])})

    def test_save_load(self, order2_table, tmp_path):
        """A saved table loads back with the same rows."""
        path = tmp_path / "table.json"
        order2_table.save(path)
        loaded = TableModel.load(path)
        assert loaded.m == 2
        assert loaded.next_distribution([1, 2]) == order2_table.next_distribution([1, 2])


class TestAlignedPair:
    """Test generated draft/target pairs."""

    def test_shapes(self):
        """One row per context in [0, V)^m."""
        pair = make_aligned_pair(V=8, m=2, lam=0.5, seed=1)
        assert pair.V == 8
        assert len(pair.contexts()) == 64
        assert pair.draft.next_distribution([3, 4]).V == 8

    def test_deterministic(self):
        """The seed alone fixes both tables."""
        a = make_aligned_pair(V=16, seed=4)
        b = make_aligned_pair(V=16, seed=4)
        assert a.target.next_distribution([5]) == b.target.next_distribution([5])
        assert a.draft.next_distribution([5]) == b.draft.next_distribution([5])

    def test_lambda_one_is_identical(self):
        """lambda=1 makes draft and target identical."""
        pair = make_aligned_pair(V=16, lam=1.0, seed=2)
        for c in pair.contexts():
            assert pair.draft.next_distribution(c) == pair.target.next_distribution(c)
        assert exact_alpha(pair) == pytest.approx(1.0, abs=1e-6)

    def test_costs_attached(self):
        """Per-token costs ride on the models."""
        pair = make_aligned_pair(V=4, draft_cost_ms=25.0, verify_cost_ms=7.5)
        assert pair.draft.cost_ms == 25.0
        assert pair.target.cost_ms == 7.5

    def test_alpha_band(self):
        """lambda=0.8, V=16: measured acceptance lies in (0.55, 0.95)."""
        pair = make_aligned_pair(V=16, m=1, lam=0.8, seed=0)
        alpha = measure_alpha(pair, n_samples=100_000, seed=1)
        assert 0.55 < alpha < 0.95
        assert alpha == pytest.approx(exact_alpha(pair), abs=0.01)

    def test_point_mass_alpha(self):
        """P = [1, 0] against Q = [0.5, 0.5] accepts half the drafts."""
        pair = AlignedPair(
            target=TableModel(V=2, default=validate_dense([1.0, 0.0])),
            draft=TableModel(V=2, default=validate_dense([0.5, 0.5])),
            lam=0.0,
        )
        assert exact_alpha(pair) == pytest.approx(0.5)
        assert measure_alpha(pair, n_samples=100_000, seed=3) == pytest.approx(0.5, abs=0.01)

    def test_alpha_estimate_stabilizes(self):
        """Two 1e5-sample estimates under different seeds agree within 0.01."""
        pair = make_aligned_pair(V=16, m=1, lam=0.8, seed=0)
        a = measure_alpha(pair, n_samples=100_000, seed=11)
        b = measure_alpha(pair, n_samples=100_000, seed=12)
        assert a != b
        assert abs(a - b) < 0.01

    def test_alpha_increases_with_lambda(self):
        """Acceptance grows with the mixing weight."""
        alphas = [exact_alpha(make_aligned_pair(V=16, lam=lam, seed=5)) for lam in (0.2, 0.5, 0.8, 1.0)]
        assert alphas == sorted(alphas)

    def test_invalid_lambda(self):
        """lambda outside [0, 1] is refused."""
        with pytest.raises(ValueError):
            make_aligned_pair(V=4, lam=1.5)

    def test_table_too_large(self):
        with pytest.raises(ValueError):
            make_aligned_pair(V=512, m=3)


class TestConstantAlphaPair:
    """Test the engineered constant-acceptance pair."""

    @pytest.mark.parametrize("alpha", [0.0, 0.3, 0.6, 1.0])
    def test_pointwise_ratio(self, alpha):
        """min(1, P/Q) equals alpha on the whole draft support."""
        pair = make_constant_alpha_pair(alpha, V=6)
        P = pair.target.next_distribution([0]).probs.astype(np.float64)
        Q = pair.draft.next_distribution([0]).probs.astype(np.float64)
        support = Q > 0
        assert np.allclose(np.minimum(1.0, P[support] / Q[support]), alpha, atol=1e-6)
        assert exact_alpha(pair) == pytest.approx(alpha, abs=1e-6)

    def test_odd_vocabulary(self):
        with pytest.raises(ValueError):
            make_constant_alpha_pair(0.5, V=5)

"""Tests for run metrics computed from traces."""

import numpy as np
import pytest

from edgespec.exceptions import EmptyRun
from edgespec.metrics import (
    RunMetrics,
    accept_length_law,
    acceptance_fit,
    collect,
    cycle_times,
    summarize,
)
from edgespec.pipeline import RunTrace


@pytest.fixture
def two_cycle_trace():
    """Hand-built trace: seed at t=10, a full hit then a rejection at position 1."""
    trace = RunTrace()
    trace.record(10.0, "edge", "decode_start")
    trace.record(10.0, "edge", "commit", n=1, total=1, source="seed")
    trace.record(20.0, "edge", "draft_done", batch_id=1, n=4, elapsed=10.0, truncated=False)
    trace.record(20.0, "edge", "send", kind="DRAFT", batch_id=1, size=37)
    trace.record(20.0, "edge", "draft_sent", batch_id=1, n=4, base_pos=2, truncated=False)
    trace.record(50.0, "cloud", "verify", batch_id=1, n=4, accepted=4, rejected=False, start=42.0, cost=8.0, pre_verified=0)
    trace.record(50.0, "cloud", "send", kind="VERDICT", batch_id=1, size=9)
    trace.record(60.0, "edge", "draft_done", batch_id=2, n=4, elapsed=30.0, truncated=False)
    trace.record(70.0, "edge", "verdict", batch_id=1, n=4, accepted=4, committed=4, rejected=False, bubble=10.0, rtt=50.0, truncated=False)
    trace.record(70.0, "edge", "commit", n=4, total=5, source="verdict")
    trace.record(70.0, "edge", "send", kind="DRAFT", batch_id=2, size=37)
    trace.record(70.0, "edge", "draft_sent", batch_id=2, n=4, base_pos=6, truncated=False)
    trace.record(95.0, "cloud", "verify", batch_id=2, n=4, accepted=1, rejected=True, start=95.0, cost=0.0, pre_verified=4)
    trace.record(95.0, "cloud", "send", kind="INTERRUPT", batch_id=2, size=11)
    trace.record(95.0, "cloud", "send", kind="VERDICT", batch_id=2, size=71)
    trace.record(110.0, "edge", "verdict", batch_id=2, n=4, accepted=1, committed=2, rejected=True, bubble=0.0, rtt=40.0, truncated=False)
    trace.record(110.0, "edge", "commit", n=2, total=7, source="verdict")
    return trace


class TestCollect:
    """Test metric extraction."""

    def test_values(self, two_cycle_trace):
        """Six tokens committed over 100 ms give 60 tok/s."""
        m = collect(two_cycle_trace)
        assert m.committed_tokens == 6
        assert m.total_time_ms == 100.0
        assert m.throughput == pytest.approx(60.0)
        assert m.ttft_ms == 60.0
        assert m.tpot_ms == pytest.approx(20.0)
        assert m.mean_accept_len == 3.0
        assert m.mean_accepted_drafts == 2.5
        assert m.t_draft_obs == 20.0
        assert m.t_verify_obs == 4.0
        assert m.bubble_total == 10.0
        assert m.cycles == 2 and m.mean_cycle_ms == 50.0
        assert m.rejections == 1
        assert m.pre_verified_tokens == 4
        assert m.uplink_bytes == 74 and m.downlink_bytes == 91

    def test_from_dataframe(self, two_cycle_trace):
        """A trace and its DataFrame give the same metrics."""
        assert collect(two_cycle_trace.to_frame()) == collect(two_cycle_trace)

    def test_invariants(self, two_cycle_trace):
        """Metrics stay within their natural ranges."""
        m = collect(two_cycle_trace)
        assert m.throughput > 0
        assert m.ttft_ms <= m.total_time_ms
        assert 0 <= m.mean_accepted_drafts <= 4

    def test_empty(self):
        """An empty trace has nothing to measure."""
        with pytest.raises(EmptyRun):
            collect(RunTrace())

    def test_seed_only(self):
        """A seed without verdicts is an empty run."""
        trace = RunTrace()
        trace.record(0.0, "edge", "decode_start")
        trace.record(0.0, "edge", "commit", n=1, total=1, source="seed")
        with pytest.raises(EmptyRun):
            collect(trace)

    def test_cycle_times(self, two_cycle_trace):
        """Cycles are the gaps between Draft sends."""
        assert cycle_times(two_cycle_trace).tolist() == [50.0]

    def test_columns(self):
        assert RunMetrics.columns()[0] == "throughput"
        assert "downlink_bytes" in RunMetrics.columns()


class TestAcceptanceLaw:
    """Test the truncated geometric law and its goodness of fit."""

    def test_law_sums_to_one(self):
        """The truncated geometric law is a distribution."""
        for alpha in (0.0, 0.3, 0.9, 1.0):
            law = accept_length_law(alpha, 5)
            assert law.sum() == pytest.approx(1.0)

    def test_law_mean(self):
        """The law has mean EL."""
        law = accept_length_law(0.6, 4)
        assert (law * np.arange(1, 5)).sum() == pytest.approx(2.176)

    def test_fit_accepts_true_law(self):
        """Samples from the law pass the fit."""
        rng = np.random.default_rng(0)
        lengths = rng.choice(np.arange(1, 5), size=20_000, p=accept_length_law(0.6, 4))
        assert acceptance_fit(lengths, 0.6, 4) > 0.01

    def test_fit_rejects_wrong_alpha(self):
        """A wrong alpha fails the fit."""
        rng = np.random.default_rng(1)
        lengths = rng.choice(np.arange(1, 5), size=20_000, p=accept_length_law(0.6, 4))
        assert acceptance_fit(lengths, 0.7, 4) < 1e-6

    def test_fit_empty(self):
        """Fitting no verdicts is an empty run."""
        with pytest.raises(EmptyRun):
            acceptance_fit([], 0.5, 4)


class TestSummarize:
    """Test aggregation over repeats."""

    def test_mean_std(self):
        """Repeats reduce to sample mean and standard deviation."""
        out = summarize([{"a": 1.0, "b": 2}, {"a": 3.0, "b": 2}], keys=["a", "b"])
        assert out["a_mean"] == 2.0
        assert out["a_std"] == pytest.approx(np.sqrt(2.0))
        assert out["b_std"] == 0.0

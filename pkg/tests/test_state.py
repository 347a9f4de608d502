"""Tests for rollback-able session state."""

import pytest

from edgespec.exceptions import Discontiguous, OutOfOrder, UnknownBatch
from edgespec.rejection import DraftBatch
from edgespec.state import SessionState


def batch(batch_id, base_pos, tokens):
    return DraftBatch.build(batch_id, base_pos, tokens, [0.5] * len(tokens))


@pytest.fixture
def state_with_two_batches():
    """Prompt of 2 tokens, then batches 1 and 2 in flight."""
    state = SessionState([7, 8])
    state.append_speculative(batch(1, 2, [1, 2, 3, 4]))
    state.append_speculative(batch(2, 6, [5, 6, 7, 8]))
    return state


class TestSpeculation:
    """Test appending in-flight batches."""

    def test_frontier(self, state_with_two_batches):
        """The frontier is the committed length plus all in-flight tokens."""
        assert len(state_with_two_batches) == 2
        assert state_with_two_batches.frontier == 10

    def test_discontiguous(self, state_with_two_batches):
        """A batch must start at the frontier."""
        with pytest.raises(Discontiguous):
            state_with_two_batches.append_speculative(batch(3, 9, [1]))

    def test_batch_ids_increase(self, state_with_two_batches):
        """Batch ids must strictly increase."""
        with pytest.raises(OutOfOrder):
            state_with_two_batches.append_speculative(batch(2, 10, [1]))

    def test_sequence_and_context(self, state_with_two_batches):
        """Contexts read across committed and speculative tokens."""
        assert state_with_two_batches.sequence([9]) == [7, 8, 1, 2, 3, 4, 5, 6, 7, 8, 9]
        assert state_with_two_batches.frontier_context(3, [9]) == (7, 8, 9)
        assert state_with_two_batches.frontier_context(6) == (3, 4, 5, 6, 7, 8)
        assert state_with_two_batches.frontier_context(12) == (7, 8, 1, 2, 3, 4, 5, 6, 7, 8)

    def test_extend_under_batches(self, state_with_two_batches):
        """Committed tokens cannot grow under in-flight batches."""
        with pytest.raises(Discontiguous):
            state_with_two_batches.extend_committed([1])


class TestCommit:
    """Test commit and rollback."""

    def test_full_hit_keeps_later_batches(self, state_with_two_batches):
        """Full acceptance keeps the pre-drafted batch."""
        dropped = state_with_two_batches.commit(1, 4)
        assert dropped == []
        assert state_with_two_batches.committed == (7, 8, 1, 2, 3, 4)
        assert list(state_with_two_batches.speculative) == [2]
        assert state_with_two_batches.rollbacks == 0

    def test_partial_with_correction(self, state_with_two_batches):
        """A rejection drops later batches and appends the correction."""
        dropped = state_with_two_batches.commit(1, 1, corrected=9)
        assert dropped == [2]
        assert state_with_two_batches.committed == (7, 8, 1, 9)
        assert state_with_two_batches.frontier == 4
        assert state_with_two_batches.checkpoints == {}
        assert state_with_two_batches.rollbacks == 1

    def test_total_miss_still_progresses(self, state_with_two_batches):
        """Rejecting the first token still commits the correction."""
        state_with_two_batches.commit(1, 0, corrected=9)
        assert state_with_two_batches.committed == (7, 8, 9)

    def test_unknown_batch(self, state_with_two_batches):
        """Committing an unknown batch fails."""
        with pytest.raises(UnknownBatch):
            state_with_two_batches.commit(5, 1)

    def test_out_of_order(self, state_with_two_batches):
        """Only the oldest in-flight batch can be committed."""
        with pytest.raises(OutOfOrder):
            state_with_two_batches.commit(2, 4)

    def test_invalid_count_leaves_state_untouched(self, state_with_two_batches):
        """A failed commit changes nothing."""
        with pytest.raises(ValueError):
            state_with_two_batches.commit(1, 5)
        assert list(state_with_two_batches.speculative) == [1, 2]
        assert len(state_with_two_batches) == 2

    def test_committed_only_grows(self, state_with_two_batches):
        """The committed prefix is never rewritten."""
        before = state_with_two_batches.committed
        state_with_two_batches.commit(1, 2, corrected=0)
        assert state_with_two_batches.committed[: len(before)] == before

    def test_discard_speculative(self, state_with_two_batches):
        """Discarding rolls the frontier back to the committed length."""
        assert state_with_two_batches.discard_speculative() == [1, 2]
        assert state_with_two_batches.frontier == 2

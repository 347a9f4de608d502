"""Rollback-able session state shared in shape by edge and cloud."""

import logging
from collections import OrderedDict
from typing import Dict, List, Optional, Sequence, Tuple

from ..core import TokenId
from ..exceptions import Discontiguous, OutOfOrder, UnknownBatch
from ..rejection import DraftBatch

logger = logging.getLogger(__name__)


class SessionState:
    """
    Committed prefix plus a contiguous chain of in-flight speculative batches.

    The committed list only ever grows. Checkpoints record the base position
    of every in-flight batch; a rollback drops every batch after the one
    being committed.
    """

    def __init__(self, prefix: Sequence[TokenId] = ()):
        self._committed: List[TokenId] = [int(t) for t in prefix]
        self.speculative: "OrderedDict[int, DraftBatch]" = OrderedDict()
        self.checkpoints: Dict[int, int] = {}
        self.rollbacks = 0

    @property
    def committed(self) -> Tuple[TokenId, ...]:
        return tuple(self._committed)

    def __len__(self) -> int:
        return len(self._committed)

    @property
    def frontier(self) -> int:
        return len(self._committed) + sum(len(b) for b in self.speculative.values())

    def extend_committed(self, tokens: Sequence[TokenId]) -> None:
        """Append tokens outside any batch (the seed token)."""
        if self.speculative:
            raise Discontiguous("cannot extend committed prefix under in-flight batches")
        self._committed.extend(int(t) for t in tokens)

    def append_speculative(self, batch: DraftBatch) -> None:
        if batch.base_pos != self.frontier:
            raise Discontiguous(
                f"batch {batch.batch_id} based at {batch.base_pos}, frontier is {self.frontier}"
            )
        if self.speculative and batch.batch_id <= next(reversed(self.speculative)):
            raise OutOfOrder(f"batch {batch.batch_id} is not newer than in-flight batches")
        self.speculative[batch.batch_id] = batch
        self.checkpoints[batch.batch_id] = batch.base_pos

    def commit(
        self, batch_id: int, accepted_count: int, corrected: Optional[TokenId] = None
    ) -> List[int]:
        """
        Commit the oldest batch's accepted prefix plus an optional correction.

        Returns:
            Ids of later batches discarded by the rollback
        """
        if batch_id not in self.speculative:
            raise UnknownBatch(f"batch {batch_id} is not in flight")
        oldest = next(iter(self.speculative))
        if batch_id != oldest:
            raise OutOfOrder(f"batch {batch_id} committed before batch {oldest}")
        batch = self.speculative[batch_id]
        if not 0 <= accepted_count <= len(batch):
            raise ValueError(f"accepted_count {accepted_count} outside [0, {len(batch)}]")
        del self.speculative[batch_id]
        del self.checkpoints[batch_id]

        self._committed.extend(batch.tokens[:accepted_count])
        if corrected is not None:
            self._committed.append(int(corrected))

        discarded: List[int] = []
        if accepted_count < len(batch) or corrected is not None:
            discarded = list(self.speculative.keys())
            self.speculative.clear()
            self.checkpoints.clear()
            self.rollbacks += 1
            if discarded:
                logger.debug("rollback after batch %d dropped %s", batch_id, discarded)
        return discarded

    def discard_speculative(self) -> List[int]:
        """Drop every in-flight batch without committing anything."""
        dropped = list(self.speculative.keys())
        self.speculative.clear()
        self.checkpoints.clear()
        return dropped

    def sequence(self, pending: Sequence[TokenId] = ()) -> List[TokenId]:
        """committed ⧺ in-flight batches ⧺ pending tokens of a draft in progress."""
        seq = list(self._committed)
        for batch in self.speculative.values():
            seq.extend(batch.tokens)
        seq.extend(pending)
        return seq

    def view(self) -> Sequence[TokenId]:
        """The committed list itself, without copying; callers must not mutate it."""
        return self._committed

    def frontier_context(self, m: int, pending: Sequence[TokenId] = ()) -> Tuple[TokenId, ...]:
        """Last m tokens of committed ⧺ speculative (⧺ pending)."""
        if m < 1:
            raise ValueError("m must be >= 1")
        tail = list(pending[-m:])
        need = m - len(tail)
        for batch in reversed(self.speculative.values()):
            if need <= 0:
                break
            taken = batch.tokens[-need:]
            tail = list(taken) + tail
            need -= len(taken)
        if need > 0:
            tail = self._committed[-need:] + tail
        return tuple(tail)

"""Draft batches sent uplink and verdicts sent back."""

from dataclasses import dataclass
from typing import Optional, Tuple

from ..core import SparseDistribution, TokenId, as_f32


@dataclass(frozen=True)
class DraftBatch:
    """
    One speculative segment.

    base_pos is the absolute sequence position of tokens[0]; chosen_probs
    holds q_i = Q_i(tokens[i]) rounded to float32.
    """

    batch_id: int
    base_pos: int
    tokens: Tuple[TokenId, ...]
    chosen_probs: Tuple[float, ...]
    truncated: bool = False

    def __post_init__(self):
        if len(self.tokens) != len(self.chosen_probs):
            raise ValueError("tokens and chosen_probs differ in length")
        if len(self.tokens) < 1:
            raise ValueError("a draft batch holds at least one token")
        if any(q <= 0 for q in self.chosen_probs):
            raise ValueError("drafted tokens must have positive draft probability")
        if self.base_pos < 0 or self.batch_id < 0:
            raise ValueError("batch_id and base_pos must be non-negative")

    @classmethod
    def build(
        cls,
        batch_id: int,
        base_pos: int,
        tokens,
        chosen_probs,
        truncated: bool = False,
    ) -> "DraftBatch":
        return cls(
            batch_id=batch_id,
            base_pos=base_pos,
            tokens=tuple(int(t) for t in tokens),
            chosen_probs=tuple(as_f32(q) for q in chosen_probs),
            truncated=truncated,
        )

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def end_pos(self) -> int:
        return self.base_pos + len(self.tokens)


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of verifying one batch.

    A rejected verdict carries the Top-K target distribution at the
    rejected position, which is also ``accepted_count``.
    """

    batch_id: int
    accepted_count: int
    sparse_target: Optional[SparseDistribution] = None

    def __post_init__(self):
        if self.accepted_count < 0:
            raise ValueError("accepted_count must be non-negative")
        if self.sparse_target is not None and self.sparse_target.K < 1:
            raise ValueError("a rejection carries a non-empty target slice")

    @property
    def rejected(self) -> bool:
        return self.sparse_target is not None

    @property
    def position(self) -> Optional[int]:
        """Index inside the batch of the first rejected token."""
        return self.accepted_count if self.rejected else None

    def committed_count(self) -> int:
        """Tokens this verdict adds to the committed sequence."""
        return self.accepted_count + (1 if self.rejected else 0)

    def check_against(self, batch: DraftBatch) -> None:
        if batch.batch_id != self.batch_id:
            raise ValueError(f"verdict {self.batch_id} does not match batch {batch.batch_id}")
        limit = len(batch) - 1 if self.rejected else len(batch)
        if self.rejected and self.accepted_count > limit:
            raise ValueError("rejection position beyond the batch")
        if not self.rejected and self.accepted_count != limit:
            raise ValueError("full acceptance must cover the whole batch")

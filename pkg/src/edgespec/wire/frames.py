"""Frame types exchanged between edge and cloud."""

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Tuple, Union

from ..core import SparseDistribution, TokenId, as_f32
from ..rejection import DraftBatch, Verdict


class FrameKind(IntEnum):
    PREFILL = 1
    SEED = 2
    DRAFT = 3
    PRE_VERIFY = 4
    VERDICT = 5
    INTERRUPT = 6


@dataclass(frozen=True)
class PrefillBody:
    tokens: Tuple[TokenId, ...]


@dataclass(frozen=True)
class SeedBody:
    token: TokenId


@dataclass(frozen=True)
class DraftBody:
    base_pos: int
    tokens: Tuple[TokenId, ...]
    probs: Tuple[float, ...]
    truncated: bool = False


@dataclass(frozen=True)
class PreVerifyBody:
    base_pos: int
    tokens: Tuple[TokenId, ...]


@dataclass(frozen=True)
class VerdictBody:
    accepted_count: int
    sparse_target: Optional[SparseDistribution] = None


@dataclass(frozen=True)
class InterruptBody:
    rollback_pos: int


Body = Union[PrefillBody, SeedBody, DraftBody, PreVerifyBody, VerdictBody, InterruptBody]

BODY_TYPES = {
    FrameKind.PREFILL: PrefillBody,
    FrameKind.SEED: SeedBody,
    FrameKind.DRAFT: DraftBody,
    FrameKind.PRE_VERIFY: PreVerifyBody,
    FrameKind.VERDICT: VerdictBody,
    FrameKind.INTERRUPT: InterruptBody,
}


@dataclass(frozen=True)
class Frame:
    kind: FrameKind
    batch_id: int
    body: Body

    def __post_init__(self):
        if not isinstance(self.body, BODY_TYPES[self.kind]):
            raise TypeError(f"{self.kind.name} frame cannot carry {type(self.body).__name__}")

    # Conversions between protocol objects and frames

    @classmethod
    def prefill(cls, tokens) -> "Frame":
        return cls(FrameKind.PREFILL, 0, PrefillBody(tuple(int(t) for t in tokens)))

    @classmethod
    def seed(cls, token: TokenId, batch_id: int = 0) -> "Frame":
        return cls(FrameKind.SEED, batch_id, SeedBody(int(token)))

    @classmethod
    def draft(cls, batch: DraftBatch) -> "Frame":
        body = DraftBody(
            base_pos=batch.base_pos,
            tokens=batch.tokens,
            probs=tuple(as_f32(q) for q in batch.chosen_probs),
            truncated=batch.truncated,
        )
        return cls(FrameKind.DRAFT, batch.batch_id, body)

    @classmethod
    def pre_verify(cls, batch_id: int, base_pos: int, tokens) -> "Frame":
        return cls(
            FrameKind.PRE_VERIFY,
            batch_id,
            PreVerifyBody(base_pos, tuple(int(t) for t in tokens)),
        )

    @classmethod
    def verdict(cls, verdict: Verdict) -> "Frame":
        return cls(
            FrameKind.VERDICT,
            verdict.batch_id,
            VerdictBody(verdict.accepted_count, verdict.sparse_target),
        )

    @classmethod
    def interrupt(cls, batch_id: int, rollback_pos: int) -> "Frame":
        return cls(FrameKind.INTERRUPT, batch_id, InterruptBody(rollback_pos))

    def as_batch(self) -> DraftBatch:
        if self.kind is not FrameKind.DRAFT:
            raise TypeError(f"{self.kind.name} frame is not a draft")
        b = self.body
        return DraftBatch(self.batch_id, b.base_pos, b.tokens, b.probs, b.truncated)

    def as_verdict(self) -> Verdict:
        if self.kind is not FrameKind.VERDICT:
            raise TypeError(f"{self.kind.name} frame is not a verdict")
        return Verdict(self.batch_id, self.body.accepted_count, self.body.sparse_target)

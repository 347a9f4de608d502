"""Cloud actor: prefill, seed, pre-verification and verification."""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from ..core import RandomStream, TokenId
from ..exceptions import Divergence, StaleBatch
from ..models import SequenceModel
from ..rejection import DraftBatch, cloud_verify, sample_seed_token
from ..state import SessionState
from ..wire import Frame, FrameKind
from .context import ActorContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Prefetch:
    batch_id: int
    token: TokenId
    done_at: float


class CloudActor:
    """
    Verifies draft batches strictly in arrival order.

    Pre-verification runs only in idle time. A position pre-verified for the
    same batch and token before verification starts costs nothing.
    """

    def __init__(
        self,
        ctx: ActorContext,
        target: SequenceModel,
        prompt: Sequence[TokenId],
        K: int,
        accept_stream: RandomStream,
        t_v: Optional[float] = None,
        fast_verify: bool = True,
    ):
        self.ctx = ctx
        self.target = target
        self.prompt = tuple(int(t) for t in prompt)
        self.K = K
        self.accept_stream = accept_stream
        self.t_v = target.cost_ms if t_v is None else t_v
        self.fast_verify = fast_verify

        self.state = SessionState(self.prompt)
        self.prefilled = False
        self.prompt_received = False
        self.seeded = False
        self.verify_busy = 0.0
        self.prefetch_free = 0.0
        self.prefetched: Dict[int, _Prefetch] = {}
        self.pending_correction: Optional[Tuple[int, int]] = None
        self.stale_batches = 0

        self._handlers = {
            FrameKind.PREFILL: self._on_prefill,
            FrameKind.DRAFT: self._on_draft,
            FrameKind.PRE_VERIFY: self._on_pre_verify,
            FrameKind.SEED: self._on_correction,
        }

    def transcript(self):
        return list(self.state.committed[len(self.prompt) :])

    def start(self) -> None:
        self.prefilled = True
        self.ctx.record("prefill", n=len(self.prompt))
        self._maybe_seed()

    def on_frame(self, frame: Frame) -> None:
        handler = self._handlers.get(frame.kind)
        if handler is None:
            logger.warning("cloud ignoring unexpected %s frame", frame.kind.name)
            return
        handler(frame)

    def _on_prefill(self, frame: Frame) -> None:
        if frame.body.tokens != self.prompt:
            raise Divergence("edge prompt differs from the cloud's prefilled prompt")
        self.prompt_received = True
        self._maybe_seed()

    def _maybe_seed(self) -> None:
        if self.seeded or not (self.prefilled and self.prompt_received):
            return
        token = sample_seed_token(self.target, self.prompt, self.accept_stream)
        self.state.extend_committed([token])
        self.seeded = True
        self.ctx.send(Frame.seed(token))

    def _on_pre_verify(self, frame: Frame) -> None:
        if not self.fast_verify:
            return
        body = frame.body
        for i, token in enumerate(body.tokens):
            done_at = max(self.ctx.now(), self.prefetch_free, self.verify_busy) + self.t_v
            self.prefetch_free = done_at
            self.prefetched[body.base_pos + i] = _Prefetch(frame.batch_id, token, done_at)

    def _pre_verified_prefix(self, batch: DraftBatch, start: float) -> int:
        count = 0
        for i, token in enumerate(batch.tokens):
            entry = self.prefetched.get(batch.base_pos + i)
            if (
                entry is None
                or entry.batch_id != batch.batch_id
                or entry.token != token
                or entry.done_at > start
            ):
                break
            count += 1
        return count

    def _on_draft(self, frame: Frame) -> None:
        batch = frame.as_batch()
        now = self.ctx.now()
        start = max(now, self.verify_busy)
        pre_verified = self._pre_verified_prefix(batch, start)
        # unfinished pre-verification of this batch is folded into verification
        for pos in range(batch.base_pos, batch.end_pos):
            self.prefetched.pop(pos, None)
        self.prefetch_free = min(self.prefetch_free, start)

        cost = self.t_v * (len(batch) - pre_verified)
        self.verify_busy = start + cost
        self.ctx.after(self.verify_busy - now, self._complete_verify, batch, start, cost, pre_verified)

    def _complete_verify(self, batch: DraftBatch, start: float, cost: float, pre_verified: int) -> None:
        try:
            verdict = cloud_verify(
                batch, self.target, self.state.view(), self.K, self.accept_stream
            )
        except StaleBatch as e:
            self.stale_batches += 1
            logger.warning("dropping stale batch: %s", e)
            self.ctx.record("stale", batch_id=batch.batch_id)
            return

        self.state.append_speculative(batch)
        self.ctx.record(
            "verify",
            batch_id=batch.batch_id,
            n=len(batch),
            accepted=verdict.accepted_count,
            rejected=verdict.rejected,
            start=start,
            cost=cost,
            pre_verified=pre_verified,
        )
        if verdict.rejected:
            self.prefetched.clear()
            self.pending_correction = (batch.batch_id, verdict.accepted_count)
            self.ctx.send(Frame.interrupt(batch.batch_id, batch.base_pos + verdict.accepted_count))
        else:
            self.state.commit(batch.batch_id, len(batch))
        self.ctx.send(Frame.verdict(verdict))

    def _on_correction(self, frame: Frame) -> None:
        pending = self.pending_correction
        if pending is None or pending[0] != frame.batch_id:
            raise Divergence(f"correction for batch {frame.batch_id} without a pending rejection")
        batch_id, accepted = pending
        self.state.commit(batch_id, accepted, frame.body.token)
        self.pending_correction = None
        # pre-verifications of the discarded pre-draft all arrived before this frame
        self.prefetched.clear()
        self.prefetch_free = min(self.prefetch_free, self.ctx.now())
        self.ctx.record("correction", batch_id=batch_id, token=frame.body.token)

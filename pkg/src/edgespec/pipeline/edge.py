"""Edge actor: drafting, pre-drafting, local resampling and rollback."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..core import StreamSet, TokenId
from ..models import SequenceModel
from ..rejection import DraftBatch, residual_resample, sample_dense
from ..state import SessionState
from ..wire import Frame, FrameKind
from .context import ActorContext
from .truncation import TruncationPolicy

logger = logging.getLogger(__name__)


@dataclass
class _Draft:
    batch_id: int
    base_pos: int
    started: float
    tokens: List[TokenId] = field(default_factory=list)
    probs: List[float] = field(default_factory=list)


class EdgeActor:
    """
    Drafts batches with the small model and reconciles verdicts.

    At most one batch awaits a verdict. In asynchronous modes the edge
    pre-drafts the next batch from the tail of the unverified one; a
    finished pre-draft is held until its predecessor is fully accepted and
    discarded on any rejection.
    """

    def __init__(
        self,
        ctx: ActorContext,
        draft: SequenceModel,
        prompt: Sequence[TokenId],
        gamma: int,
        streams: StreamSet,
        max_tokens: int,
        t_d: Optional[float] = None,
        asynchronous: bool = True,
        fast_verify: bool = True,
        truncation: Optional[TruncationPolicy] = None,
        cost_schedule: Sequence[Tuple[int, float]] = (),
        on_done: Optional[Callable[[], None]] = None,
    ):
        self.ctx = ctx
        self.draft = draft
        self.prompt = tuple(int(t) for t in prompt)
        self.gamma = gamma
        self.draft_stream = streams.edge_draft
        self.resample_stream = streams.edge_resample
        self.max_tokens = max_tokens
        self.t_d = draft.cost_ms if t_d is None else t_d
        self.asynchronous = asynchronous
        self.fast_verify = fast_verify and asynchronous
        self.truncation = truncation if asynchronous else None
        self.cost_schedule = sorted(cost_schedule)
        self.on_done = on_done

        self.state = SessionState(self.prompt)
        self.next_batch_id = 1
        self.epoch = 0
        self.drafting: Optional[_Draft] = None
        self.awaiting: Optional[DraftBatch] = None
        self.held: Optional[DraftBatch] = None
        self.idle_since: Optional[float] = None
        self.sent_at: Dict[int, float] = {}
        self.decode_started: Optional[float] = None
        self.done = False

        self._handlers = {
            FrameKind.SEED: self._on_seed,
            FrameKind.VERDICT: self._on_verdict,
            FrameKind.INTERRUPT: self._on_interrupt,
        }

    @property
    def generated(self) -> int:
        return len(self.state) - len(self.prompt)

    def transcript(self) -> List[TokenId]:
        return list(self.state.committed[len(self.prompt) :])

    def cost_multiplier(self, batch_id: int) -> float:
        multiplier = 1.0
        for start, factor in self.cost_schedule:
            if batch_id >= start:
                multiplier = factor
        return multiplier

    # Lifecycle

    def start(self) -> None:
        self.ctx.record("prefill", n=len(self.prompt))
        self.ctx.send(Frame.prefill(self.prompt))

    def on_frame(self, frame: Frame) -> None:
        handler = self._handlers.get(frame.kind)
        if handler is None:
            logger.warning("edge ignoring unexpected %s frame", frame.kind.name)
            return
        handler(frame)

    def _on_seed(self, frame: Frame) -> None:
        if self.decode_started is not None:
            logger.warning("edge ignoring duplicate seed")
            return
        self.state.extend_committed([frame.body.token])
        self.decode_started = self.ctx.now()
        self.ctx.record("decode_start")
        self.ctx.record("commit", n=1, total=self.generated, source="seed")
        # at least one verified batch follows the seed
        self._begin_draft()

    def _finish(self) -> None:
        self.done = True
        self._abort_draft()
        self.held = None
        self.state.discard_speculative()
        self.ctx.record("edge_done", total=self.generated)
        if self.on_done is not None:
            self.on_done()

    # Drafting

    def _begin_draft(self) -> None:
        if self.done or self.drafting is not None:
            return
        self.drafting = _Draft(
            batch_id=self.next_batch_id, base_pos=self.state.frontier, started=self.ctx.now()
        )
        self.next_batch_id += 1
        self.idle_since = None
        self._schedule_token()

    def _schedule_token(self) -> None:
        cost = self.t_d * self.cost_multiplier(self.drafting.batch_id)
        self.ctx.after(cost, self._draft_token, self.epoch)

    def _abort_draft(self) -> None:
        if self.drafting is not None:
            self.ctx.record("draft_aborted", batch_id=self.drafting.batch_id, n=len(self.drafting.tokens))
        self.epoch += 1
        self.drafting = None

    def _draft_token(self, epoch: int) -> None:
        if epoch != self.epoch or self.drafting is None:
            return
        d = self.drafting
        context = self.state.frontier_context(self.draft.m, d.tokens)
        position = self.state.frontier + len(d.tokens)
        Q = self.draft.next_distribution(context)
        token = sample_dense(Q, self.draft_stream.uniform_at(position))
        d.tokens.append(token)
        d.probs.append(Q[token])

        if self.fast_verify and self.awaiting is not None:
            self.ctx.send(Frame.pre_verify(d.batch_id, position, [token]))

        if len(d.tokens) >= self.gamma:
            self._finish_draft(truncated=False)
        elif (
            self.truncation is not None
            and self.awaiting is None
            and self.truncation.should_truncate(self.ctx.now() - d.started)
        ):
            self.ctx.record("truncate", batch_id=d.batch_id, n=len(d.tokens))
            self._finish_draft(truncated=True)
        else:
            self._schedule_token()

    def _finish_draft(self, truncated: bool) -> None:
        d = self.drafting
        self.drafting = None
        batch = DraftBatch.build(d.batch_id, d.base_pos, d.tokens, d.probs, truncated)
        self.state.append_speculative(batch)
        self.ctx.record(
            "draft_done",
            batch_id=batch.batch_id,
            n=len(batch),
            elapsed=self.ctx.now() - d.started,
            truncated=truncated,
        )
        if self.awaiting is None:
            self._send_batch(batch)
            if self.asynchronous:
                self._begin_draft()
            else:
                self.idle_since = self.ctx.now()
        else:
            self.held = batch
            self.idle_since = self.ctx.now()
            self.ctx.record("hold", batch_id=batch.batch_id)

    def _send_batch(self, batch: DraftBatch) -> None:
        self.awaiting = batch
        self.sent_at[batch.batch_id] = self.ctx.now()
        self.ctx.send(Frame.draft(batch))
        self.ctx.record(
            "draft_sent",
            batch_id=batch.batch_id,
            n=len(batch),
            base_pos=batch.base_pos,
            truncated=batch.truncated,
        )

    # Verification results

    def _on_interrupt(self, frame: Frame) -> None:
        self.ctx.record("interrupt", batch_id=frame.batch_id)
        if not self.asynchronous or self.awaiting is None:
            return
        if frame.batch_id != self.awaiting.batch_id:
            return
        self._abort_draft()
        self.held = None
        if self.idle_since is None:
            self.idle_since = self.ctx.now()

    def _on_verdict(self, frame: Frame) -> None:
        verdict = frame.as_verdict()
        batch = self.awaiting
        if batch is None or verdict.batch_id != batch.batch_id:
            logger.warning("edge dropping verdict for batch %d it is not awaiting", verdict.batch_id)
            return
        verdict.check_against(batch)
        self.awaiting = None

        now = self.ctx.now()
        round_trip = now - self.sent_at.pop(batch.batch_id)
        if self.truncation is not None:
            self.truncation.observe(round_trip)
        bubble = now - self.idle_since if self.idle_since is not None else 0.0

        if verdict.rejected:
            j = verdict.accepted_count
            m = self.draft.m
            context = (list(self.state.view()[-m:]) + list(batch.tokens[:j]))[-m:]
            Q = self.draft.next_distribution(context)
            corrected = residual_resample(verdict.sparse_target, Q, self.resample_stream)
            self._abort_draft()
            self.held = None
            dropped = self.state.commit(batch.batch_id, j, corrected)
            self.ctx.send(Frame.seed(corrected, batch_id=batch.batch_id))
            logger.debug("batch %d rejected at %d, dropped %s", batch.batch_id, j, dropped)
        else:
            self.state.commit(batch.batch_id, len(batch))

        committed = verdict.committed_count()
        self.ctx.record(
            "verdict",
            batch_id=batch.batch_id,
            n=len(batch),
            accepted=verdict.accepted_count,
            committed=committed,
            rejected=verdict.rejected,
            bubble=bubble,
            rtt=round_trip,
            truncated=batch.truncated,
        )
        self.ctx.record("commit", n=committed, total=self.generated, source="verdict")

        if self.generated >= self.max_tokens:
            self._finish()
            return
        if not verdict.rejected and self.held is not None:
            held, self.held = self.held, None
            self._send_batch(held)
            self._begin_draft()
        elif self.drafting is None:
            self._begin_draft()

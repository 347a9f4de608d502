"""Cloud-side verification and the dense single-process reference."""

import logging
from typing import List, Optional, Sequence, Tuple

from ..core import RandomStream, StreamSeeds, StreamSet, TokenId
from ..exceptions import StaleBatch
from ..models import SequenceModel
from .batches import DraftBatch, Verdict
from .sampling import accept_test, dense_residual_resample, sample_dense, topk_compress

logger = logging.getLogger(__name__)


def cloud_verify(
    batch: DraftBatch,
    target: SequenceModel,
    committed_context: Sequence[TokenId],
    K: int,
    accept_stream: RandomStream,
) -> Verdict:
    """
    Test each drafted token in order against the target model.

    Consumes accepted_count + 1 accept draws on a rejection and len(batch)
    draws on full acceptance.

    Raises:
        StaleBatch: batch.base_pos differs from the committed length
    """
    if batch.base_pos != len(committed_context):
        raise StaleBatch(batch.batch_id, batch.base_pos, len(committed_context))

    context = list(committed_context[-target.m :])
    for i, (token, q) in enumerate(zip(batch.tokens, batch.chosen_probs)):
        P = target.next_distribution(context)
        if not accept_test(P[token], q, accept_stream.draw_uniform()):
            return Verdict(batch.batch_id, i, topk_compress(P, K))
        context.append(token)
    return Verdict(batch.batch_id, len(batch))


def draft_tokens(
    draft: SequenceModel,
    context: Sequence[TokenId],
    n: int,
    draft_stream: RandomStream,
) -> Tuple[List[TokenId], List[float]]:
    """Draft n tokens; the token at absolute position i uses draw i of the stream."""
    position = len(context)
    ctx = list(context[-draft.m :])
    tokens, probs = [], []
    for i in range(n):
        Q = draft.next_distribution(ctx)
        token = sample_dense(Q, draft_stream.uniform_at(position + i))
        tokens.append(token)
        probs.append(Q[token])
        ctx.append(token)
    return tokens, probs


def vanilla_step_reference(
    draft: SequenceModel,
    target: SequenceModel,
    context: Sequence[TokenId],
    gamma: int,
    streams: StreamSet,
) -> Tuple[List[TokenId], Optional[TokenId]]:
    """
    One speculative step with full dense distributions on both sides.

    Randomness is consumed exactly as the split scheme consumes it, so for
    K = V both produce the same tokens.
    """
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    tokens, _ = draft_tokens(draft, context, gamma, streams.edge_draft)
    ctx = list(context[-max(draft.m, target.m) :])
    for i, token in enumerate(tokens):
        P = target.next_distribution(ctx)
        Q = draft.next_distribution(ctx)
        if not accept_test(P[token], Q[token], streams.cloud_accept.draw_uniform()):
            corrected = dense_residual_resample(P, Q, streams.edge_resample)
            return tokens[:i], corrected
        ctx.append(token)
    return tokens, None


def sample_seed_token(
    target: SequenceModel, prompt: Sequence[TokenId], accept_stream: RandomStream
) -> TokenId:
    """First generated token, sampled by the cloud right after prefill."""
    return sample_dense(target.next_distribution(prompt), accept_stream.draw_uniform())


def reference_decode(
    draft: SequenceModel,
    target: SequenceModel,
    prompt: Sequence[TokenId],
    gamma: int,
    max_tokens: int,
    seeds: StreamSeeds = StreamSeeds(),
) -> List[TokenId]:
    """Generated tokens (seed first) of a plain draft-then-verify loop, cut at max_tokens."""
    streams = StreamSet(seeds)
    sequence = list(prompt)
    sequence.append(sample_seed_token(target, sequence, streams.cloud_accept))
    while len(sequence) - len(prompt) < max_tokens:
        accepted, corrected = vanilla_step_reference(
            draft, target, sequence, gamma, streams
        )
        sequence.extend(accepted)
        if corrected is not None:
            sequence.append(corrected)
    return sequence[len(prompt) : len(prompt) + max_tokens]

"""Little-endian fixed-width frame codec.

Layout (all integers unsigned, little-endian)::

    header     kind u8 | batch_id u32 | body_len u16
    Prefill    count u16 | count x token u16
    Seed       token u16
    Draft      base_pos u32 | count u8 | truncated u8 | count x (token u16, q f32)
    PreVerify  base_pos u32 | count u8 | count x token u16
    Verdict    accepted u8 | flag u8 [| K' u16 | K' x (token u16, p f32)]
    Interrupt  rollback_pos u32
"""

import struct
from typing import Callable, Dict

from ..core import SparseDistribution
from ..exceptions import (
    BadKind,
    DistributionError,
    LengthMismatch,
    Overflow,
    Truncated,
    WireError,
)
from .frames import (
    DraftBody,
    Frame,
    FrameKind,
    InterruptBody,
    PrefillBody,
    PreVerifyBody,
    SeedBody,
    VerdictBody,
)

HEADER = struct.Struct("<BIH")
HEADER_SIZE = HEADER.size  # 7

_U8 = struct.Struct("<B")
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")
_DRAFT_HEAD = struct.Struct("<IBB")
_PRE_VERIFY_HEAD = struct.Struct("<IB")
_VERDICT_HEAD = struct.Struct("<BB")
_PAIR = struct.Struct("<Hf")

MAX_BODY = 0xFFFF


def _pack(fmt: struct.Struct, *values) -> bytes:
    try:
        return fmt.pack(*values)
    except (struct.error, OverflowError) as e:
        raise Overflow(f"field out of range for {fmt.format!r}: {values}") from e


def _pack_tokens(tokens) -> bytes:
    return b"".join(_pack(_U16, t) for t in tokens)


def _pack_pairs(ids, probs) -> bytes:
    return b"".join(_pack(_PAIR, i, p) for i, p in zip(ids, probs))


def _encode_body(frame: Frame) -> bytes:
    body = frame.body
    kind = frame.kind
    if kind is FrameKind.PREFILL:
        return _pack(_U16, len(body.tokens)) + _pack_tokens(body.tokens)
    if kind is FrameKind.SEED:
        return _pack(_U16, body.token)
    if kind is FrameKind.DRAFT:
        if len(body.tokens) != len(body.probs):
            raise LengthMismatch("draft tokens and probs differ in length")
        head = _pack(_DRAFT_HEAD, body.base_pos, len(body.tokens), int(body.truncated))
        return head + _pack_pairs(body.tokens, body.probs)
    if kind is FrameKind.PRE_VERIFY:
        return _pack(_PRE_VERIFY_HEAD, body.base_pos, len(body.tokens)) + _pack_tokens(
            body.tokens
        )
    if kind is FrameKind.VERDICT:
        if body.sparse_target is None:
            return _pack(_VERDICT_HEAD, body.accepted_count, 0)
        sparse = body.sparse_target
        return (
            _pack(_VERDICT_HEAD, body.accepted_count, 1)
            + _pack(_U16, sparse.K)
            + _pack_pairs(sparse.ids, sparse.probs)
        )
    if kind is FrameKind.INTERRUPT:
        return _pack(_U32, body.rollback_pos)
    raise BadKind(f"unknown frame kind {kind!r}")


def encode(frame: Frame) -> bytes:
    """Serialize a frame; raises Overflow when a field exceeds its width."""
    body = _encode_body(frame)
    if len(body) > MAX_BODY:
        raise Overflow(f"body of {len(body)} bytes exceeds {MAX_BODY}")
    return _pack(HEADER, int(frame.kind), frame.batch_id, len(body)) + body


class _Reader:
    """Cursor over one frame body that never reads past its end."""

    def __init__(self, body: memoryview):
        self.body = body
        self.offset = 0

    def take(self, fmt: struct.Struct):
        end = self.offset + fmt.size
        if end > len(self.body):
            raise LengthMismatch(
                f"body of {len(self.body)} bytes too short for declared contents"
            )
        values = fmt.unpack_from(self.body, self.offset)
        self.offset = end
        return values

    def one(self, fmt: struct.Struct):
        return self.take(fmt)[0]

    def finish(self) -> None:
        if self.offset != len(self.body):
            raise LengthMismatch(
                f"{len(self.body) - self.offset} unread bytes after frame contents"
            )


def _decode_prefill(r: _Reader) -> PrefillBody:
    n = r.one(_U16)
    return PrefillBody(tuple(r.one(_U16) for _ in range(n)))


def _decode_seed(r: _Reader) -> SeedBody:
    return SeedBody(r.one(_U16))


def _decode_draft(r: _Reader) -> DraftBody:
    base_pos, n, truncated = r.take(_DRAFT_HEAD)
    pairs = [r.take(_PAIR) for _ in range(n)]
    return DraftBody(
        base_pos=base_pos,
        tokens=tuple(t for t, _ in pairs),
        probs=tuple(q for _, q in pairs),
        truncated=bool(truncated),
    )


def _decode_pre_verify(r: _Reader) -> PreVerifyBody:
    base_pos, n = r.take(_PRE_VERIFY_HEAD)
    return PreVerifyBody(base_pos, tuple(r.one(_U16) for _ in range(n)))


def _decode_verdict(r: _Reader) -> VerdictBody:
    accepted, flag = r.take(_VERDICT_HEAD)
    if flag == 0:
        return VerdictBody(accepted)
    if flag != 1:
        raise WireError(f"bad verdict flag {flag}")
    k = r.one(_U16)
    pairs = [r.take(_PAIR) for _ in range(k)]
    try:
        sparse = SparseDistribution(
            ids=tuple(i for i, _ in pairs), probs=tuple(p for _, p in pairs)
        )
    except DistributionError as e:
        raise WireError(f"invalid sparse target: {e}") from e
    return VerdictBody(accepted, sparse)


def _decode_interrupt(r: _Reader) -> InterruptBody:
    return InterruptBody(r.one(_U32))


_DECODERS: Dict[FrameKind, Callable[[_Reader], object]] = {
    FrameKind.PREFILL: _decode_prefill,
    FrameKind.SEED: _decode_seed,
    FrameKind.DRAFT: _decode_draft,
    FrameKind.PRE_VERIFY: _decode_pre_verify,
    FrameKind.VERDICT: _decode_verdict,
    FrameKind.INTERRUPT: _decode_interrupt,
}


def decode(data: bytes) -> Frame:
    """
    Parse exactly one frame.

    Raises:
        Truncated: fewer bytes than the header or its declared body length
        BadKind: unknown kind byte
        LengthMismatch: trailing bytes, or body contents disagreeing with body_len
    """
    view = memoryview(data)
    if len(view) < HEADER_SIZE:
        raise Truncated(f"{len(view)} bytes is shorter than the {HEADER_SIZE}-byte header")
    kind_byte, batch_id, body_len = HEADER.unpack_from(view, 0)
    try:
        kind = FrameKind(kind_byte)
    except ValueError as e:
        raise BadKind(f"unknown frame kind {kind_byte}") from e
    end = HEADER_SIZE + body_len
    if len(view) < end:
        raise Truncated(f"header declares {body_len} body bytes, {len(view) - HEADER_SIZE} present")
    if len(view) > end:
        raise LengthMismatch(f"{len(view) - end} bytes beyond declared frame length")

    reader = _Reader(view[HEADER_SIZE:end])
    body = _DECODERS[kind](reader)
    reader.finish()
    return Frame(kind, batch_id, body)


def frame_size_model(kind: FrameKind, n: int = 0) -> int:
    """
    Encoded size in bytes of a frame of the given kind and arity.

    n is the token count for Prefill/Draft/PreVerify and the number of
    sparse entries K' for Verdict (0 means full acceptance). The model is
    closed-form and answers hypothetical sizes beyond the u16 body limit.
    """
    kind = FrameKind(kind)
    if kind is FrameKind.PREFILL:
        body = _U16.size + 2 * n
    elif kind is FrameKind.SEED:
        body = _U16.size
    elif kind is FrameKind.DRAFT:
        body = _DRAFT_HEAD.size + _PAIR.size * n
    elif kind is FrameKind.PRE_VERIFY:
        body = _PRE_VERIFY_HEAD.size + 2 * n
    elif kind is FrameKind.VERDICT:
        body = _VERDICT_HEAD.size + (_U16.size + _PAIR.size * n if n > 0 else 0)
    else:
        body = _U32.size
    return HEADER_SIZE + body


def frame_arity(frame: Frame) -> int:
    """The n for which frame_size_model(frame.kind, n) == len(encode(frame))."""
    body = frame.body
    if frame.kind in (FrameKind.PREFILL, FrameKind.DRAFT, FrameKind.PRE_VERIFY):
        return len(body.tokens)
    if frame.kind is FrameKind.VERDICT:
        return body.sparse_target.K if body.sparse_target is not None else 0
    return 0

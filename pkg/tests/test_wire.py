"""Tests for the frame codec."""

import math

import numpy as np
import pytest

from edgespec.core import SparseDistribution, as_f32
from edgespec.exceptions import BadKind, LengthMismatch, Overflow, Truncated, WireError
from edgespec.rejection import DraftBatch, Verdict
from edgespec.wire import (
    HEADER_SIZE,
    Frame,
    FrameKind,
    decode,
    encode,
    frame_arity,
    frame_size_model,
)
from edgespec.wire.frames import (
    DraftBody,
    InterruptBody,
    PrefillBody,
    PreVerifyBody,
    SeedBody,
    VerdictBody,
)


@pytest.fixture
def draft_frame():
    batch = DraftBatch.build(7, 12, [3, 1, 4, 1], [0.5, 0.25, 0.125, 0.0625])
    return Frame.draft(batch)


@pytest.fixture
def rejected_verdict_frame():
    sparse = SparseDistribution.from_pairs([(i, 0.09 - 0.001 * i) for i in range(10)])
    return Frame.verdict(Verdict(7, 2, sparse))


class TestEncoding:
    """Test exact byte layouts."""

    def test_header_size(self):
        """Header is kind u8, batch_id u32, body_len u16."""
        assert HEADER_SIZE == 7

    def test_draft_bytes(self, draft_frame):
        """Draft layout is little-endian head then (u16, f32) pairs."""
        data = encode(draft_frame)
        assert len(data) == 37
        assert data[:7] == bytes([3, 7, 0, 0, 0, 30, 0])
        assert data[7:13] == bytes([12, 0, 0, 0, 4, 0])
        assert data[13:19] == bytes.fromhex("0300" "0000003f")

    def test_verdict_sizes(self, rejected_verdict_frame):
        """An accept verdict is 9 bytes; a K=10 rejection is 71."""
        assert len(encode(Frame.verdict(Verdict(7, 4)))) == 9
        assert len(encode(rejected_verdict_frame)) == 71

    def test_budgets(self, draft_frame, rejected_verdict_frame):
        """Draft and K=10 verdict frames stay within their byte budgets."""
        assert len(encode(draft_frame)) <= 50
        assert len(encode(rejected_verdict_frame)) <= 100

    def test_small_frames(self):
        """Seed, interrupt, pre-verify and prefill byte layouts."""
        assert encode(Frame.seed(513, batch_id=2)) == bytes([2, 2, 0, 0, 0, 2, 0, 1, 2])
        assert encode(Frame.interrupt(4, 258)) == bytes([6, 4, 0, 0, 0, 4, 0, 2, 1, 0, 0])
        assert len(encode(Frame.pre_verify(3, 10, [1]))) == 14
        assert len(encode(Frame.prefill([1, 2, 3]))) == 15

    def test_truncated_flag(self):
        """The truncated flag is the last byte of the draft head."""
        batch = DraftBatch.build(1, 0, [1], [0.5], truncated=True)
        assert encode(Frame.draft(batch))[12] == 1

    def test_overflow(self):
        """Values beyond their field width are refused."""
        with pytest.raises(Overflow):
            encode(Frame.seed(70_000))
        with pytest.raises(Overflow):
            encode(Frame.prefill(range(40_000)))

    def test_body_type_checked(self):
        """A body must match its frame kind."""
        with pytest.raises(TypeError):
            Frame(FrameKind.SEED, 0, Frame.interrupt(0, 0).body)


class TestDecoding:
    """Test parsing and error reporting."""

    def test_draft(self, draft_frame):
        """A decoded draft rebuilds the original batch."""
        frame = decode(encode(draft_frame))
        assert frame == draft_frame
        batch = frame.as_batch()
        assert batch.chosen_probs == (0.5, 0.25, 0.125, 0.0625)

    def test_probabilities_survive_bit_exact(self):
        """float32 probabilities survive the wire unchanged."""
        q = as_f32(0.1234567)
        frame = Frame.draft(DraftBatch.build(1, 0, [5], [q]))
        assert decode(encode(frame)).body.probs[0] == q

    def test_rejected_verdict(self, rejected_verdict_frame):
        """A rejection keeps its position and Top-K slice."""
        verdict = decode(encode(rejected_verdict_frame)).as_verdict()
        assert verdict.rejected and verdict.accepted_count == 2
        assert verdict.sparse_target.K == 10
        assert verdict.sparse_target == rejected_verdict_frame.body.sparse_target

    def test_truncated_header(self):
        with pytest.raises(Truncated):
            decode(b"\x03\x00")

    def test_truncated_body(self, draft_frame):
        """A body shorter than body_len is reported as truncated."""
        with pytest.raises(Truncated):
            decode(encode(draft_frame)[:-1])

    def test_trailing_bytes(self, draft_frame):
        """Bytes after the declared frame are rejected."""
        with pytest.raises(LengthMismatch):
            decode(encode(draft_frame) + b"\x00")

    def test_bad_kind(self):
        """An unknown kind byte is refused."""
        with pytest.raises(BadKind):
            decode(bytes([99, 0, 0, 0, 0, 0, 0]))

    def test_count_disagrees_with_length(self, draft_frame):
        """A pair count that disagrees with body_len is refused."""
        data = bytearray(encode(draft_frame))
        data[11] = 5  # count says 5 pairs, body holds 4
        with pytest.raises(LengthMismatch):
            decode(bytes(data))

    def test_bad_verdict_flag(self):
        """Verdict flags other than 0 and 1 are a wire error."""
        data = bytearray(encode(Frame.verdict(Verdict(1, 3))))
        data[8] = 2
        with pytest.raises(WireError):
            decode(bytes(data))

    def test_invalid_sparse_payload(self):
        """Duplicate ids in a verdict slice are a wire error."""
        good = encode(Frame.verdict(Verdict(1, 0, SparseDistribution(ids=(1, 2), probs=(0.5, 0.25)))))
        data = bytearray(good)
        data[17:19] = (1).to_bytes(2, "little")
        with pytest.raises(WireError):
            decode(bytes(data))


class TestSizeModel:
    """Test the closed-form size model."""

    def test_matches_encoder(self, draft_frame, rejected_verdict_frame):
        """The size model agrees with the encoder for every kind."""
        frames = [
            draft_frame,
            rejected_verdict_frame,
            Frame.verdict(Verdict(1, 4)),
            Frame.seed(3),
            Frame.interrupt(1, 9),
            Frame.pre_verify(1, 0, [1, 2]),
            Frame.prefill([0] * 17),
        ]
        for frame in frames:
            assert frame_size_model(frame.kind, frame_arity(frame)) == len(encode(frame))

    def test_formulas(self):
        """Draft is 13 + 6n bytes; a rejection verdict is 11 + 6K."""
        assert frame_size_model(FrameKind.DRAFT, 4) == 13 + 6 * 4
        assert frame_size_model(FrameKind.VERDICT, 10) == 11 + 6 * 10
        assert frame_size_model(FrameKind.VERDICT, 0) == 9

    def test_dense_versus_sparse(self):
        """Dense verdicts at V=128256 cost over a thousand times the K=10 slice."""
        dense = frame_size_model(FrameKind.VERDICT, 128_256)
        sparse = frame_size_model(FrameKind.VERDICT, 10)
        assert dense == 769_547
        assert dense / sparse > 1000
        assert math.log10(dense / sparse) > 3


def _tokens(rng, low, high):
    return tuple(int(t) for t in rng.integers(0, 1 << 16, size=int(rng.integers(low, high + 1))))


def _f32_probs(rng, n, mass):
    raw = rng.random(n) + 0.01
    return tuple(as_f32(p) for p in np.sort(raw / raw.sum() * mass)[::-1])


def _random_frame(rng, kind: FrameKind) -> Frame:
    batch_id = int(rng.integers(0, 1 << 32))
    if kind is FrameKind.PREFILL:
        return Frame(kind, batch_id, PrefillBody(_tokens(rng, 0, 64)))
    if kind is FrameKind.SEED:
        return Frame(kind, batch_id, SeedBody(int(rng.integers(0, 1 << 16))))
    if kind is FrameKind.DRAFT:
        tokens = _tokens(rng, 1, 16)
        probs = tuple(as_f32(q) for q in rng.uniform(1e-6, 1.0, size=len(tokens)))
        body = DraftBody(int(rng.integers(0, 1 << 32)), tokens, probs, bool(rng.integers(0, 2)))
        return Frame(kind, batch_id, body)
    if kind is FrameKind.PRE_VERIFY:
        return Frame(kind, batch_id, PreVerifyBody(int(rng.integers(0, 1 << 32)), _tokens(rng, 0, 16)))
    if kind is FrameKind.VERDICT:
        accepted = int(rng.integers(0, 256))
        if rng.random() < 0.5:
            return Frame(kind, batch_id, VerdictBody(accepted))
        k = int(rng.integers(1, 33))
        ids = tuple(int(i) for i in rng.choice(1 << 16, size=k, replace=False))
        sparse = SparseDistribution(ids=ids, probs=_f32_probs(rng, k, rng.uniform(0.05, 0.99)))
        return Frame(kind, batch_id, VerdictBody(accepted, sparse))
    return Frame(kind, batch_id, InterruptBody(int(rng.integers(0, 1 << 32))))


class TestRoundTrip:
    """Test encode/decode as inverses on random valid frames."""

    def test_random_frames(self):
        """Ten thousand seeded frames of every kind survive both directions."""
        rng = np.random.default_rng(2024)
        kinds = list(FrameKind)
        seen = set()
        for i in range(10_000):
            frame = _random_frame(rng, kinds[i % len(kinds)])
            data = encode(frame)
            decoded = decode(data)
            assert decoded == frame
            assert encode(decoded) == data
            assert len(data) == frame_size_model(frame.kind, frame_arity(frame))
            seen.add(frame.kind)
        assert seen == set(FrameKind)

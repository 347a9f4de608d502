"""Binary wire format shared by the simulator and the socket transport."""

from .codec import HEADER_SIZE, decode, encode, frame_arity, frame_size_model
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

__all__ = [
    "HEADER_SIZE",
    "encode",
    "decode",
    "frame_arity",
    "frame_size_model",
    "Frame",
    "FrameKind",
    "DraftBody",
    "InterruptBody",
    "PrefillBody",
    "PreVerifyBody",
    "SeedBody",
    "VerdictBody",
]

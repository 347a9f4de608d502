"""Simulated and socket transports for frames."""

from .channel import ChannelConfig, Direction, InFlightMessage, SimulatedChannel
from .socket import (
    FrameEndpoint,
    Listener,
    connect,
    handshake,
    parse_address,
    socket_transport,
)

__all__ = [
    "ChannelConfig",
    "Direction",
    "InFlightMessage",
    "SimulatedChannel",
    "FrameEndpoint",
    "Listener",
    "connect",
    "handshake",
    "parse_address",
    "socket_transport",
]

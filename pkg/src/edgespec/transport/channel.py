"""Deterministic simulated duplex channel."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

from ..core import RandomStream, StreamLabel

logger = logging.getLogger(__name__)


class Direction(Enum):
    UPLINK = "uplink"  # edge -> cloud
    DOWNLINK = "downlink"  # cloud -> edge


@dataclass(frozen=True)
class ChannelConfig:
    """
    Link parameters shared by both directions.

    Serialization cost is folded into the one-way latency.
    """

    one_way_latency: float = 0.0
    bandwidth: float = math.inf  # bytes per ms
    jitter_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.one_way_latency < 0:
            raise ValueError("latency must be non-negative")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        if self.jitter_std < 0:
            raise ValueError("jitter_std must be non-negative")

    def transmission_ms(self, size: int) -> float:
        return size / self.bandwidth

    def rtt(self, up_bytes: int, down_bytes: int) -> float:
        """Jitter-free round trip for one uplink and one downlink message."""
        return (
            2 * self.one_way_latency
            + self.transmission_ms(up_bytes)
            + self.transmission_ms(down_bytes)
        )


@dataclass(frozen=True)
class InFlightMessage:
    data: bytes
    direction: Direction
    send_time: float
    arrival_time: float

    @property
    def size(self) -> int:
        return len(self.data)


class SimulatedChannel:
    """
    Schedules arrivals for frames; never blocks the sender.

    arrival = send + latency + size/bandwidth + N(0, jitter_std), clamped to
    be no earlier than the send time nor than the previous arrival in the
    same direction.
    """

    def __init__(self, config: ChannelConfig, stream: Optional[RandomStream] = None):
        self.config = config
        self.stream = stream or RandomStream(config.seed, StreamLabel.NETWORK)
        self._last_send: Dict[Direction, float] = {}
        self._last_arrival: Dict[Direction, float] = {}
        self.bytes_sent: Dict[Direction, int] = {d: 0 for d in Direction}
        self.messages_sent: Dict[Direction, int] = {d: 0 for d in Direction}

    def send(self, direction: Direction, data: bytes, now: float) -> InFlightMessage:
        last_send = self._last_send.get(direction, -math.inf)
        if now < last_send:
            raise ValueError(f"send at {now} precedes previous {direction.value} send at {last_send}")

        delay = self.config.one_way_latency + self.config.transmission_ms(len(data))
        if self.config.jitter_std > 0:
            delay += self.stream.draw_normal(self.config.jitter_std)
        arrival = max(now, now + delay)
        arrival = max(arrival, self._last_arrival.get(direction, -math.inf))

        self._last_send[direction] = now
        self._last_arrival[direction] = arrival
        self.bytes_sent[direction] += len(data)
        self.messages_sent[direction] += 1
        return InFlightMessage(data, direction, now, arrival)

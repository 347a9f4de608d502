"""What an actor needs from its runtime: a clock, timers and a peer link."""

from abc import ABC, abstractmethod
from typing import Any, Callable, Optional

from ..transport import Direction, SimulatedChannel
from ..wire import Frame, decode, encode
from .clock import EventClock
from .trace import RunTrace


class ActorContext(ABC):
    """Runtime services for one actor; identical for simulation and sockets."""

    def __init__(self, role: str, trace: RunTrace):
        self.role = role
        self.trace = trace

    @abstractmethod
    def now(self) -> float:
        """Current time in (virtual) milliseconds."""
        pass

    @abstractmethod
    def after(self, delay_ms: float, callback: Callable, *args: Any) -> None:
        pass

    @abstractmethod
    def transmit(self, data: bytes) -> None:
        """Hand encoded bytes to the link without blocking."""
        pass

    def send(self, frame: Frame) -> None:
        data = encode(frame)
        self.trace.record(
            self.now(), self.role, "send", kind=frame.kind.name, batch_id=frame.batch_id, size=len(data)
        )
        self.transmit(data)

    def record(self, event: str, **fields: Any) -> None:
        self.trace.record(self.now(), self.role, event, **fields)


class SimContext(ActorContext):
    """Actor context backed by the event clock and a simulated channel."""

    def __init__(
        self,
        role: str,
        clock: EventClock,
        channel: SimulatedChannel,
        trace: RunTrace,
    ):
        super().__init__(role, trace)
        self.clock = clock
        self.channel = channel
        self.direction = Direction.UPLINK if role == "edge" else Direction.DOWNLINK
        self.peer: Optional[Any] = None

    def now(self) -> float:
        return self.clock.now

    def after(self, delay_ms: float, callback: Callable, *args: Any) -> None:
        self.clock.after(delay_ms, callback, *args)

    def transmit(self, data: bytes) -> None:
        msg = self.channel.send(self.direction, data, self.clock.now)
        self.clock.schedule(msg.arrival_time, self._deliver, msg.data)

    def _deliver(self, data: bytes) -> None:
        self.peer.on_frame(decode(data))

"""Virtual-time event scheduler."""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Tuple

logger = logging.getLogger(__name__)


@dataclass(order=True)
class _Scheduled:
    time: float
    seq: int
    callback: Callable = field(compare=False)
    args: Tuple[Any, ...] = field(compare=False, default=())


class EventClock:
    """
    Deterministic single-threaded scheduler.

    Events run in (time, insertion order); virtual time never decreases.
    """

    def __init__(self):
        self.now = 0.0
        self._queue: List[_Scheduled] = []
        self._seq = 0
        self.executed = 0

    def schedule(self, at: float, callback: Callable, *args: Any) -> int:
        if at < self.now:
            raise ValueError(f"cannot schedule at {at} before now={self.now}")
        self._seq += 1
        heapq.heappush(self._queue, _Scheduled(at, self._seq, callback, args))
        return self._seq

    def after(self, delay: float, callback: Callable, *args: Any) -> int:
        return self.schedule(self.now + delay, callback, *args)

    def pending(self) -> int:
        return len(self._queue)

    def step(self) -> bool:
        if not self._queue:
            return False
        event = heapq.heappop(self._queue)
        self.now = event.time
        event.callback(*event.args)
        self.executed += 1
        return True

    def run(self, max_events: Optional[int] = None) -> int:
        """Run until the queue drains (or max_events); returns events executed."""
        start = self.executed
        while self._queue:
            if max_events is not None and self.executed - start >= max_events:
                logger.warning("event budget of %d exhausted at t=%.3f", max_events, self.now)
                break
            self.step()
        return self.executed - start

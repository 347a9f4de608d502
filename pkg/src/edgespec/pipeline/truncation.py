"""Latency-aware draft truncation."""

import logging
import math
from typing import Optional

logger = logging.getLogger(__name__)


class TruncationPolicy:
    """
    Cut a draft short once its drafting time exceeds beta x EWMA(round trip).

    The round trip is send-to-verdict time, which includes verification.
    beta=None (or infinity) disables truncation.
    """

    def __init__(self, beta: Optional[float] = 1.25, decay: float = 0.2):
        if beta is not None and beta <= 0:
            raise ValueError("beta must be positive")
        if not 0.0 < decay <= 1.0:
            raise ValueError("EWMA decay must be in (0, 1]")
        self.beta = beta
        self.decay = decay
        self.ewma: Optional[float] = None
        self.fired = 0

    @property
    def enabled(self) -> bool:
        return self.beta is not None and math.isfinite(self.beta)

    @property
    def budget(self) -> Optional[float]:
        if not self.enabled or self.ewma is None:
            return None
        return self.beta * self.ewma

    def observe(self, round_trip_ms: float) -> None:
        if self.ewma is None:
            self.ewma = round_trip_ms
        else:
            self.ewma = self.decay * round_trip_ms + (1.0 - self.decay) * self.ewma

    def should_truncate(self, elapsed_draft_ms: float) -> bool:
        budget = self.budget
        if budget is None:
            return False
        if elapsed_draft_ms > budget:
            self.fired += 1
            logger.debug("truncating draft at %.3f ms (budget %.3f)", elapsed_draft_ms, budget)
            return True
        return False

"""Per-session protocol parameters."""

from dataclasses import dataclass, field

from .distributions import MAX_VOCAB
from .streams import StreamSeeds

MAX_GAMMA = 64


@dataclass(frozen=True)
class SessionConfig:
    V: int
    gamma: int = 4
    K: int = 10
    seeds: StreamSeeds = field(default_factory=StreamSeeds)

    def __post_init__(self):
        if not 2 <= self.V <= MAX_VOCAB:
            raise ValueError(f"V must be in [2, {MAX_VOCAB}], got {self.V}")
        if not 1 <= self.gamma <= MAX_GAMMA:
            raise ValueError(f"gamma must be in [1, {MAX_GAMMA}], got {self.gamma}")
        if not 1 <= self.K <= self.V:
            raise ValueError(f"K must be in [1, V={self.V}], got {self.K}")

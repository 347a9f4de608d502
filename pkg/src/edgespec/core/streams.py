"""Label-partitioned, counter-based random streams.

Each (seed, label) pair owns one Philox sequence. Values can be consumed
sequentially or read at an absolute index; both views address the same
sequence, so a draw is fully determined by (seed, label, index).
"""

from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np
from scipy.special import ndtri

_BLOCK = 4096


class StreamLabel(Enum):
    EDGE_DRAFT = 0
    CLOUD_ACCEPT = 1
    EDGE_RESAMPLE = 2
    NETWORK = 3


class RandomStream:
    """Deterministic uniform stream for a single consumer."""

    def __init__(self, seed: int, label: StreamLabel):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.label = label
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(label.value,))
        self._gen = np.random.Generator(np.random.Philox(seq))
        self._blocks: List[np.ndarray] = []
        self.cursor = 0

    def _ensure(self, index: int) -> None:
        while len(self._blocks) * _BLOCK <= index:
            self._blocks.append(self._gen.random(_BLOCK))

    def uniform_at(self, index: int) -> float:
        """Value at an absolute index; does not move the cursor."""
        if index < 0:
            raise IndexError("stream index must be non-negative")
        self._ensure(index)
        return float(self._blocks[index // _BLOCK][index % _BLOCK])

    def draw_uniform(self) -> float:
        """Next value in [0, 1); advances the cursor by one."""
        value = self.uniform_at(self.cursor)
        self.cursor += 1
        return value

    def draw_many(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError(f"cannot draw {n} values")
        if n == 0:
            return np.empty(0)
        start = self.cursor
        self._ensure(start + n - 1)
        first, last = start // _BLOCK, (start + n - 1) // _BLOCK
        span = self._blocks[first] if first == last else np.concatenate(self._blocks[first : last + 1])
        offset = start - first * _BLOCK
        self.cursor += n
        return span[offset : offset + n].copy()

    def draw_normal(self, std: float = 1.0) -> float:
        """Gaussian draw by inverse CDF of the next uniform."""
        u = self.draw_uniform()
        return float(std * ndtri(max(u, 1e-300)))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, label={self.label.name}, cursor={self.cursor})"


@dataclass(frozen=True)
class StreamSeeds:
    edge_draft: int = 0
    cloud_accept: int = 0
    edge_resample: int = 0
    network: int = 0

    @classmethod
    def from_base(cls, seed: int) -> "StreamSeeds":
        return cls(seed, seed, seed, seed)

    def offset(self, delta: int) -> "StreamSeeds":
        return StreamSeeds(
            self.edge_draft + delta,
            self.cloud_accept + delta,
            self.edge_resample + delta,
            self.network + delta,
        )


class StreamSet:
    """The four streams of one session, each handed to exactly one owner."""

    def __init__(self, seeds: StreamSeeds):
        self.seeds = seeds
        self.edge_draft = RandomStream(seeds.edge_draft, StreamLabel.EDGE_DRAFT)
        self.cloud_accept = RandomStream(seeds.cloud_accept, StreamLabel.CLOUD_ACCEPT)
        self.edge_resample = RandomStream(
            seeds.edge_resample, StreamLabel.EDGE_RESAMPLE
        )
        self.network = RandomStream(seeds.network, StreamLabel.NETWORK)

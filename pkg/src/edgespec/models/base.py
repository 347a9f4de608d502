"""Base sequence model class."""

from abc import ABC, abstractmethod
from typing import Sequence, Tuple

from ..core import DenseDistribution, TokenId


class SequenceModel(ABC):
    """Abstract order-m model producing next-token distributions."""

    def __init__(self, V: int, m: int = 1, cost_ms: float = 0.0):
        if m < 1:
            raise ValueError("model order m must be >= 1")
        if cost_ms < 0:
            raise ValueError("per-token cost must be non-negative")
        self.V = V
        self.m = m
        self.cost_ms = cost_ms

    @abstractmethod
    def next_distribution(self, context: Sequence[TokenId]) -> DenseDistribution:
        """Distribution of the next token given the last min(m, len) tokens."""
        pass

    def context_key(self, context: Sequence[TokenId]) -> Tuple[int, ...]:
        key = tuple(int(t) for t in context[-self.m :])
        for t in key:
            if not 0 <= t < self.V:
                raise ValueError(f"token {t} outside vocabulary of size {self.V}")
        return key

"""Validated probability containers.

Probabilities are stored as 32-bit floats everywhere, including on the wire,
so a value tested on the cloud is bit-identical to the value the edge
computed.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DistributionError, NegativeMass, NotNormalized

TokenId = int

NORMALIZATION_TOL = 1e-6
MAX_VOCAB = 65536


def as_f32(value: float) -> float:
    """Round a real to the nearest 32-bit float, returned as a Python float."""
    return float(np.float32(value))


@dataclass(frozen=True, eq=False)
class DenseDistribution:
    """Full next-token distribution over a vocabulary of size V."""

    probs: np.ndarray

    @property
    def V(self) -> int:
        return int(self.probs.shape[0])

    def __getitem__(self, token: TokenId) -> float:
        return float(self.probs[token])

    def __len__(self) -> int:
        return self.V

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseDistribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def tolist(self) -> List[float]:
        return [float(p) for p in self.probs]


def validate_dense(raw: Iterable[float], V: Optional[int] = None) -> DenseDistribution:
    """Validate a raw probability vector and freeze it as float32."""
    arr = np.asarray(list(raw) if not isinstance(raw, np.ndarray) else raw)
    if arr.ndim != 1:
        raise DistributionError(f"expected a 1-d vector, got shape {arr.shape}")
    if V is not None and arr.shape[0] != V:
        raise DistributionError(f"expected length {V}, got {arr.shape[0]}")
    if arr.shape[0] < 1:
        raise DistributionError("empty probability vector")
    if arr.shape[0] > MAX_VOCAB:
        raise DistributionError(f"vocabulary larger than {MAX_VOCAB}")

    probs = arr.astype(np.float32)
    if np.any(probs < 0) or np.any(np.isnan(probs)):
        raise NegativeMass(f"negative entry at index {int(np.argmin(probs))}")
    total = float(np.sum(probs, dtype=np.float64))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"entries sum to {total:.9f}")

    probs.setflags(write=False)
    return DenseDistribution(probs)


def uniform(V: int) -> DenseDistribution:
    return validate_dense(np.full(V, 1.0 / V))


@dataclass(frozen=True)
class SparseDistribution:
    """Top-K slice of a distribution: (id, prob) pairs, most probable first."""

    ids: Tuple[int, ...]
    probs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.ids) != len(self.probs):
            raise DistributionError("ids and probs differ in length")
        if len(set(self.ids)) != len(self.ids):
            raise DistributionError("duplicate token ids in sparse distribution")
        if any(i < 0 or i >= MAX_VOCAB for i in self.ids):
            raise DistributionError("token id out of range")
        if any(p <= 0 for p in self.probs):
            raise DistributionError("sparse entries must carry positive mass")
        if any(a < b for a, b in zip(self.probs, self.probs[1:])):
            raise DistributionError("sparse probs must be non-increasing")
        if sum(self.probs) > 1.0 + NORMALIZATION_TOL:
            raise NotNormalized(f"sparse mass {sum(self.probs):.9f} exceeds 1")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[int, float]]) -> "SparseDistribution":
        return cls(
            ids=tuple(int(i) for i, _ in pairs),
            probs=tuple(as_f32(p) for _, p in pairs),
        )

    @property
    def K(self) -> int:
        return len(self.ids)

    @property
    def mass(self) -> float:
        return float(sum(self.probs))

    def pairs(self) -> List[Tuple[int, float]]:
        return list(zip(self.ids, self.probs))

    def prob(self, token: TokenId) -> float:
        for i, p in zip(self.ids, self.probs):
            if i == token:
                return p
        return 0.0

    def to_dense(self, V: int) -> np.ndarray:
        """Reconstruct a length-V vector with zeros outside the support."""
        out = np.zeros(V, dtype=np.float32)
        out[list(self.ids)] = self.probs
        return out

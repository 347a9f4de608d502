"""Acceptance test, Top-K compression and residual resampling."""

from typing import Sequence

import numpy as np

from ..core import DenseDistribution, RandomStream, SparseDistribution, TokenId
from ..exceptions import DomainError


def accept_test(p: float, q: float, u: float) -> bool:
    """True iff u < min(1, p/q)."""
    if q <= 0:
        raise DomainError(f"draft probability must be positive, got {q}")
    return u < min(1.0, p / q)


def inverse_cdf_sample(weights: np.ndarray, u: float) -> int:
    """
    Index drawn from unnormalized non-negative weights with uniform u.

    Zero-weight entries are never returned, which lets a sparse support and
    its dense zero-padded counterpart select the same element for equal u.
    """
    cdf = np.cumsum(np.asarray(weights, dtype=np.float64))
    total = cdf[-1]
    if not total > 0:
        raise DomainError("cannot sample from zero total mass")
    idx = int(np.searchsorted(cdf, u * total, side="right"))
    return min(idx, len(cdf) - 1)


def sample_dense(dist: DenseDistribution, u: float) -> TokenId:
    return inverse_cdf_sample(dist.probs, u)


def topk_compress(P: DenseDistribution, K: int) -> SparseDistribution:
    """Keep the K most probable entries, ties to the lower id, zeros dropped."""
    if not 1 <= K <= P.V:
        raise ValueError(f"K must be in [1, {P.V}], got {K}")
    order = np.argsort(-P.probs, kind="stable")[:K]
    keep = order[P.probs[order] > 0]
    return SparseDistribution(
        ids=tuple(int(i) for i in keep),
        probs=tuple(float(P.probs[i]) for i in keep),
    )


def _residual_weights(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.maximum(p.astype(np.float64) - q.astype(np.float64), 0.0)


def residual_support(sparse_P: SparseDistribution, Q: DenseDistribution):
    """
    Residual over the sparse support, ids ascending.

    Returns (ids, weights); weights fall back to sparse_P itself when the
    residual has no mass.
    """
    if sparse_P.K < 1:
        raise ValueError("empty sparse target")
    ids = np.array(sorted(sparse_P.ids), dtype=np.int64)
    p = np.array([sparse_P.prob(int(i)) for i in ids], dtype=np.float32)
    weights = _residual_weights(p, Q.probs[ids])
    if not weights.sum() > 0:
        weights = p.astype(np.float64)
    return ids, weights


def residual_resample(
    sparse_P: SparseDistribution, Q: DenseDistribution, stream: RandomStream
) -> TokenId:
    """Sample norm(max(0, P - Q)) restricted to the sparse support."""
    ids, weights = residual_support(sparse_P, Q)
    return int(ids[inverse_cdf_sample(weights, stream.draw_uniform())])


def dense_residual_resample(
    P: DenseDistribution, Q: DenseDistribution, stream: RandomStream
) -> TokenId:
    """Residual sampling with the full target vector (reference path)."""
    weights = _residual_weights(P.probs, Q.probs)
    if not weights.sum() > 0:
        weights = P.probs.astype(np.float64)
    return inverse_cdf_sample(weights, stream.draw_uniform())


def output_distribution(
    P: DenseDistribution, Q: DenseDistribution, K: int
) -> np.ndarray:
    """
    Exact distribution of the next committed token under the split scheme.

    A draft x ~ Q is kept with probability min(1, P/Q); otherwise the token
    comes from the residual over the Top-K slice of P.
    """
    p = P.probs.astype(np.float64)
    q = Q.probs.astype(np.float64)
    kept = np.minimum(p, q)
    reject_mass = max(0.0, 1.0 - kept.sum())
    ids, weights = residual_support(topk_compress(P, K), Q)
    out = kept.copy()
    out[ids] += reject_mass * weights / weights.sum()
    return out


def tv_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Total-variation distance between two distributions on the same support."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(0.5 * np.abs(a - b).sum())

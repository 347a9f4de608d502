"""Draft/target model pairs with a controllable acceptance rate."""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..core import validate_dense
from .table import TableModel

logger = logging.getLogger(__name__)

MAX_TABLE_ENTRIES = 1 << 24


@dataclass(frozen=True)
class AlignedPair:
    """Cloud target model plus an edge draft model mixed toward it by lambda."""

    target: TableModel
    draft: TableModel
    lam: float

    @property
    def V(self) -> int:
        return self.target.V

    def contexts(self) -> List[Tuple[int, ...]]:
        return self.target.contexts() or [()]


def _normalize_rows(rows: np.ndarray) -> np.ndarray:
    rows = rows / rows.sum(axis=1, keepdims=True)
    return rows.astype(np.float32)


def make_aligned_pair(
    V: int,
    m: int = 1,
    lam: float = 0.8,
    seed: int = 0,
    concentration: float = 0.5,
    draft_cost_ms: float = 0.0,
    verify_cost_ms: float = 0.0,
) -> AlignedPair:
    """
    Build a random target table and a draft table mixed toward it.

    Args:
        V: Vocabulary size
        m: Markov order (context length)
        lam: Mixing weight; draft = lam * target + (1 - lam) * noise
        seed: Seed for target rows and noise rows (independent of lam)
        concentration: Dirichlet concentration of target rows; small values
            give peaked, long-tailed rows
        draft_cost_ms: Simulated per-token forward cost on the edge
        verify_cost_ms: Simulated per-token verification cost on the cloud

    Returns:
        AlignedPair with one row per context in [0, V)^m
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    n_rows = V**m
    if n_rows * V > MAX_TABLE_ENTRIES:
        raise ValueError(f"table of {n_rows} rows x {V} is too large")

    rng = np.random.default_rng(seed)
    target64 = rng.dirichlet(np.full(V, concentration), size=n_rows)
    target64 = target64 / target64.sum(axis=1, keepdims=True)
    noise64 = rng.random((n_rows, V))
    noise64 = noise64 / noise64.sum(axis=1, keepdims=True)

    draft64 = lam * target64 + (1.0 - lam) * noise64
    target32 = _normalize_rows(target64)
    draft32 = _normalize_rows(draft64)

    contexts = list(itertools.product(range(V), repeat=m))
    target = TableModel(
        V=V,
        m=m,
        rows={c: validate_dense(row, V) for c, row in zip(contexts, target32)},
        cost_ms=verify_cost_ms,
    )
    draft = TableModel(
        V=V,
        m=m,
        rows={c: validate_dense(row, V) for c, row in zip(contexts, draft32)},
        cost_ms=draft_cost_ms,
    )
    logger.debug("built aligned pair V=%d m=%d lambda=%.3f seed=%d", V, m, lam, seed)
    return AlignedPair(target=target, draft=draft, lam=lam)


def make_constant_alpha_pair(
    alpha: float,
    V: int = 4,
    draft_cost_ms: float = 0.0,
    verify_cost_ms: float = 0.0,
) -> AlignedPair:
    """
    Pair whose every drafted token is accepted with probability exactly alpha.

    The draft is uniform over the lower half of the vocabulary; the target
    puts alpha of its mass there (uniformly) and the rest on the upper half,
    so P(x)/Q(x) == alpha for every x the draft can produce.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if V < 2 or V % 2:
        raise ValueError("constant-alpha pair needs an even V >= 2")
    half = V // 2
    q = np.concatenate([np.full(half, 1.0 / half), np.zeros(half)])
    p = np.concatenate([np.full(half, alpha / half), np.full(half, (1.0 - alpha) / half)])
    target = TableModel(V=V, m=1, default=validate_dense(p, V), cost_ms=verify_cost_ms)
    draft = TableModel(V=V, m=1, default=validate_dense(q, V), cost_ms=draft_cost_ms)
    return AlignedPair(target=target, draft=draft, lam=alpha)


def _sample_rows(rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sample one index per row."""
    cdf = np.cumsum(rows.astype(np.float64), axis=1)
    threshold = u * cdf[:, -1]
    idx = np.sum(cdf <= threshold[:, None], axis=1)
    return np.minimum(idx, rows.shape[1] - 1)


def measure_alpha(
    pair: AlignedPair, n_samples: int = 100_000, seed: int = 0, chunk: int = 8192
) -> float:
    """Monte Carlo estimate of E[min(1, P(x)/Q(x))] with x ~ Q, contexts uniform."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    contexts = pair.contexts()
    total = 0.0
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        picks = rng.integers(0, len(contexts), size=n)
        chosen = [contexts[i] for i in picks]
        q_rows = pair.draft.row_matrix(chosen)
        p_rows = pair.target.row_matrix(chosen)
        x = _sample_rows(q_rows, rng.random(n))
        q = q_rows[np.arange(n), x].astype(np.float64)
        p = p_rows[np.arange(n), x].astype(np.float64)
        total += float(np.minimum(1.0, p / q).sum())
        done += n
    return total / n_samples


def exact_alpha(pair: AlignedPair) -> float:
    """Closed-form acceptance rate: mean over contexts of sum_x min(P, Q)."""
    contexts = pair.contexts()
    q_rows = pair.draft.row_matrix(contexts).astype(np.float64)
    p_rows = pair.target.row_matrix(contexts).astype(np.float64)
    return float(np.minimum(p_rows, q_rows).sum(axis=1).mean())

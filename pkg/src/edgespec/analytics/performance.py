"""Closed-form performance model of the synchronous and pipelined protocols.

Times are milliseconds; throughputs are tokens per millisecond.
"""

from dataclasses import dataclass, replace
from typing import Dict

ALPHA_ONE = 1.0 - 1e-9


@dataclass(frozen=True)
class PerfParams:
    alpha: float
    gamma: int
    t_draft: float  # whole-batch drafting time
    t_verify: float  # whole-batch verification time
    t_rtt: float
    t_pre: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")
        for name in ("t_draft", "t_verify", "t_rtt", "t_pre"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def with_alpha(self, alpha: float) -> "PerfParams":
        return replace(self, alpha=alpha)


def expected_accept_length(alpha: float, gamma: int) -> float:
    """Mean committed tokens per verification round: (1 - a^g) / (1 - a)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    if alpha >= ALPHA_ONE:
        return float(gamma)
    return (1.0 - alpha**gamma) / (1.0 - alpha)


def sync_latency(t_draft: float, t_rtt: float, t_verify: float) -> float:
    return t_draft + t_rtt + t_verify


def sync_throughput(params: PerfParams) -> float:
    return expected_accept_length(params.alpha, params.gamma) / sync_latency(
        params.t_draft, params.t_rtt, params.t_verify
    )


def hit_probability(params: PerfParams) -> float:
    return params.alpha**params.gamma


def async_expected_latency(params: PerfParams) -> float:
    """Expected time per round: hits cost max(D, R+V), misses cost D+R+V."""
    p_hit = hit_probability(params)
    hit = max(params.t_draft, params.t_rtt + params.t_verify)
    miss = sync_latency(params.t_draft, params.t_rtt, params.t_verify)
    return p_hit * hit + (1.0 - p_hit) * miss


def async_throughput(params: PerfParams) -> float:
    return expected_accept_length(params.alpha, params.gamma) / async_expected_latency(params)


def speedup(params: PerfParams) -> float:
    if params.t_draft <= 0:
        raise ValueError("speedup needs t_draft > 0")
    return async_throughput(params) / sync_throughput(params)


def speedup_limit(params: PerfParams) -> float:
    """Upper bound of the speedup, reached at alpha = 1 when compute-bound."""
    if params.t_draft <= 0:
        raise ValueError("speedup needs t_draft > 0")
    return 1.0 + (params.t_rtt + params.t_verify) / params.t_draft


def bubble_time(t_rtt: float, t_verify: float, t_draft: float, t_pre: float = 0.0) -> float:
    return max(0.0, t_rtt + t_verify - t_draft - t_pre)


def cloud_ar_latency(t_rtt: float, t_verify_token: float) -> float:
    """Per-token latency of cloud-only decoding with a network hop per token."""
    return t_rtt + t_verify_token


def cloud_ar_throughput(t_rtt: float, t_verify_token: float) -> float:
    latency = cloud_ar_latency(t_rtt, t_verify_token)
    return 1.0 / latency if latency > 0 else float("inf")


def report(params: PerfParams) -> Dict[str, float]:
    """Every model quantity for one parameter set."""
    return {
        "EL": expected_accept_length(params.alpha, params.gamma),
        "L_sync": sync_latency(params.t_draft, params.t_rtt, params.t_verify),
        "R_sync": sync_throughput(params),
        "P_hit": hit_probability(params),
        "E_T_async": async_expected_latency(params),
        "R_async": async_throughput(params),
        "S": speedup(params) if params.t_draft > 0 else float("nan"),
        "S_limit": speedup_limit(params) if params.t_draft > 0 else float("nan"),
        "T_bubble": bubble_time(params.t_rtt, params.t_verify, params.t_draft, params.t_pre),
    }

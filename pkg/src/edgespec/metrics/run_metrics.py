"""Evaluation metrics computed from a run's event trace."""

import math
from dataclasses import asdict, dataclass, fields
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import stats

from ..exceptions import EmptyRun


@dataclass(frozen=True)
class RunMetrics:
    """
    Flat record of one run.

    Times are virtual milliseconds measured from decode start (seed
    arrival at the edge). mean_accept_len counts committed tokens per
    verdict (accepted drafts plus the correction); mean_accepted_drafts
    counts accepted draft tokens only.
    """

    throughput: float  # tokens/s
    ttft_ms: float
    tpot_ms: float
    mean_accept_len: float
    mean_accepted_drafts: float
    t_draft_obs: float
    t_verify_obs: float
    bubble_total: float
    stale_batches: int
    committed_tokens: int
    total_time_ms: float
    cycles: int
    mean_cycle_ms: float
    rejections: int
    truncations: int
    pre_verified_tokens: int
    uplink_bytes: int
    downlink_bytes: int

    def to_dict(self) -> Dict[str, Union[int, float]]:
        return asdict(self)

    @classmethod
    def columns(cls) -> List[str]:
        return [f.name for f in fields(cls)]


def _of(df: pd.DataFrame, actor: str, event: str) -> pd.DataFrame:
    return df[(df["actor"] == actor) & (df["event"] == event)]


def collect(trace, stale_batches: int = 0) -> RunMetrics:
    """
    Compute RunMetrics from a RunTrace (or its DataFrame).

    Throughput counts tokens committed by verdicts after decode start;
    the seed token is the zero point, not part of the count.

    Raises:
        EmptyRun: no verdict ever committed a token
    """
    df = trace if isinstance(trace, pd.DataFrame) else trace.to_frame()
    if df.empty:
        raise EmptyRun("trace holds no events")

    start_rows = _of(df, "edge", "decode_start")
    commits = _of(df, "edge", "commit")
    commits = commits[commits["source"] == "verdict"] if "source" in commits else commits.iloc[0:0]
    if start_rows.empty or commits.empty:
        raise EmptyRun("no tokens committed after decode start")
    t0 = float(start_rows["time"].iloc[0])

    times = commits["time"].to_numpy(dtype=float)
    counts = commits["n"].to_numpy(dtype=int)
    committed = int(counts.sum())
    total_time = float(times[-1] - t0)
    throughput = committed / total_time * 1000.0 if total_time > 0 else math.inf
    ttft = float(times[0] - t0)
    after_first = committed - int(counts[0])
    tpot = float(times[-1] - times[0]) / after_first if after_first > 0 else ttft

    verdicts = _of(df, "edge", "verdict")
    sent = _of(df, "edge", "draft_sent")
    done = _of(df, "edge", "draft_done")
    done = done[done["batch_id"].isin(sent["batch_id"])]
    verifies = _of(df, "cloud", "verify")
    sends = df[df["event"] == "send"]

    send_times = sent["time"].to_numpy(dtype=float)
    mean_cycle = float(np.diff(send_times).mean()) if len(send_times) > 1 else 0.0

    return RunMetrics(
        throughput=throughput,
        ttft_ms=ttft,
        tpot_ms=tpot,
        mean_accept_len=float(verdicts["committed"].mean()),
        mean_accepted_drafts=float(verdicts["accepted"].mean()),
        t_draft_obs=float(done["elapsed"].mean()) if not done.empty else 0.0,
        t_verify_obs=float(verifies["cost"].mean()) if not verifies.empty else 0.0,
        bubble_total=float(verdicts["bubble"].sum()),
        stale_batches=int(stale_batches),
        committed_tokens=committed,
        total_time_ms=total_time,
        cycles=int(len(sent)),
        mean_cycle_ms=mean_cycle,
        rejections=int(verdicts["rejected"].astype(bool).sum()),
        truncations=int(len(_of(df, "edge", "truncate"))),
        pre_verified_tokens=int(verifies["pre_verified"].sum()) if not verifies.empty else 0,
        uplink_bytes=int(sends.loc[sends["actor"] == "edge", "size"].sum()),
        downlink_bytes=int(sends.loc[sends["actor"] == "cloud", "size"].sum()),
    )


def cycle_times(trace) -> pd.Series:
    """Intervals between consecutive Draft sends."""
    df = trace if isinstance(trace, pd.DataFrame) else trace.to_frame()
    sent = _of(df, "edge", "draft_sent")
    return sent["time"].diff().dropna().reset_index(drop=True)


def accept_length_law(alpha: float, gamma: int) -> np.ndarray:
    """P(committed = k) for k = 1..gamma under i.i.d. acceptance with rate alpha."""
    k = np.arange(1, gamma + 1)
    probs = alpha ** (k - 1) * (1.0 - alpha)
    probs[-1] = alpha ** (gamma - 1)
    return probs


def acceptance_fit(
    committed_lengths: Sequence[int], alpha: float, gamma: int, min_expected: float = 5.0
) -> float:
    """
    Chi-square goodness-of-fit p-value of per-verdict committed lengths
    against the truncated geometric law. Sparse bins are pooled.
    """
    lengths = np.asarray(committed_lengths, dtype=int)
    if lengths.size == 0:
        raise EmptyRun("no verdicts to fit")
    observed = np.bincount(lengths, minlength=gamma + 1)[1 : gamma + 1].astype(float)
    expected = accept_length_law(alpha, gamma) * lengths.size

    obs_bins: List[float] = []
    exp_bins: List[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            obs_bins.append(acc_o)
            exp_bins.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if exp_bins:
            obs_bins[-1] += acc_o
            exp_bins[-1] += acc_e
        else:
            obs_bins.append(acc_o)
            exp_bins.append(acc_e)
    if len(obs_bins) < 2:
        return 1.0
    return float(stats.chisquare(obs_bins, exp_bins).pvalue)


def summarize(records: Sequence[Dict[str, float]], keys: Optional[Sequence[str]] = None) -> Dict[str, float]:
    """Mean and standard deviation per metric across repeats."""
    df = pd.DataFrame.from_records(records)
    keys = list(keys) if keys is not None else [c for c in df.columns if pd.api.types.is_numeric_dtype(df[c])]
    out: Dict[str, float] = {}
    for key in keys:
        out[f"{key}_mean"] = float(df[key].mean())
        out[f"{key}_std"] = float(df[key].std(ddof=1)) if len(df) > 1 else 0.0
    return out

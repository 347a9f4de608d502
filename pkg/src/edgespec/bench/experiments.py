"""Simulation experiments with closed-form predictions side by side."""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..analytics import PerfParams, report
from ..core import TokenId
from ..metrics import RunMetrics, summarize
from ..models import exact_alpha
from ..pipeline import PipelineMode, run
from ..rejection import output_distribution, tv_distance
from ..wire import FrameKind, frame_size_model
from .scenario import ScenarioConfig

logger = logging.getLogger(__name__)

SWEEP_DIMENSIONS = {
    "gamma": "session.gamma",
    "K": "session.K",
    "rtt": "channel.one_way_latency",
    "lambda": "model.lambda",
    "alpha": "model.alpha",
}

PREDICTION_COLUMNS = [
    "alpha_exact",
    "tv_distance",
    "pred_EL",
    "pred_L_sync",
    "pred_R_sync",
    "pred_E_T_async",
    "pred_R_async",
    "pred_S",
    "pred_S_limit",
    "pred_T_bubble",
    "pred_throughput",
]


def scenario_tv_distance(scenario: ScenarioConfig, K: Optional[int] = None) -> float:
    """Mean over contexts of TV(committed-token law, target) for Top-K verdicts."""
    pair = scenario.build_pair()
    K = scenario.session.K if K is None else K
    distances = []
    for context in pair.contexts():
        P = pair.target.next_distribution(context)
        Q = pair.draft.next_distribution(context)
        distances.append(tv_distance(output_distribution(P, Q, K), P.probs))
    return float(np.mean(distances))


def perf_params(scenario: ScenarioConfig) -> PerfParams:
    """Closed-form parameters implied by a scenario (jitter ignored)."""
    gamma = scenario.session.gamma
    channel = scenario.channel_config()
    rtt = channel.rtt(
        frame_size_model(FrameKind.DRAFT, gamma), frame_size_model(FrameKind.VERDICT, 0)
    )
    return PerfParams(
        alpha=min(1.0, max(0.0, exact_alpha(scenario.build_pair()))),
        gamma=gamma,
        t_draft=scenario.costs.t_d * gamma,
        t_verify=scenario.costs.t_v * gamma,
        t_rtt=rtt,
    )


def predictions(scenario: ScenarioConfig, mode: PipelineMode) -> Dict[str, float]:
    params = perf_params(scenario)
    quantities = report(params)
    K = scenario.model.V if mode.dense_verdicts else scenario.session.K
    out = {
        "alpha_exact": params.alpha,
        "tv_distance": scenario_tv_distance(scenario, K),
    }
    out.update({f"pred_{k}": v for k, v in quantities.items() if k != "P_hit"})
    rate = quantities["R_sync"] if mode is PipelineMode.SYNC else quantities["R_async"]
    out["pred_throughput"] = rate * 1000.0
    for key in ("pred_R_sync", "pred_R_async"):
        out[key] *= 1000.0  # tokens/s
    return out


def simulate(
    scenario: ScenarioConfig,
    mode: Optional[Union[str, PipelineMode]] = None,
    max_tokens: Optional[int] = None,
    repeats: int = 1,
) -> Tuple[List[TokenId], Dict[str, object]]:
    """
    Run a scenario (optionally several seeds) and attach predictions.

    Repeat r uses the scenario seed plus r. With repeats > 1 the record
    holds <metric>_mean and <metric>_std columns.

    Returns:
        (transcript of the first repeat, flat record)
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    mode = PipelineMode.parse(mode if mode is not None else scenario.mode)
    transcript: List[TokenId] = []
    records = []
    for r in range(repeats):
        variant = scenario if r == 0 else scenario.updated(**{"session.seed": scenario.session.seed + r})
        tokens, metrics = run(variant, mode, max_tokens)
        if r == 0:
            transcript = tokens
        records.append(metrics.to_dict())

    record: Dict[str, object] = {
        "scenario": scenario.name,
        "mode": mode.value,
        "digest": scenario.digest(),
    }
    if repeats == 1:
        record.update(records[0])
    else:
        record["repeats"] = repeats
        record.update(summarize(records, RunMetrics.columns()))
    record.update(predictions(scenario, mode))
    return transcript, record


def _parse_value(dim: str, value, scenario: ScenarioConfig):
    if dim == "K" and str(value) == "V":
        return scenario.model.V
    if dim in ("gamma", "K"):
        return int(value)
    return float(value)


def sweep(
    scenario: ScenarioConfig,
    dim: str,
    values: Sequence,
    mode: Optional[Union[str, PipelineMode]] = None,
    max_tokens: Optional[int] = None,
    repeats: int = 1,
    progress: bool = True,
) -> pd.DataFrame:
    """
    One row per swept value: all metrics plus predictions.

    rtt values are round trips; the channel's one-way latency is half.
    """
    if dim not in SWEEP_DIMENSIONS:
        raise ValueError(f"unknown sweep dimension {dim!r}; choose from {sorted(SWEEP_DIMENSIONS)}")
    if len(values) < 2:
        raise ValueError("a sweep needs at least two values")

    rows = []
    for raw in tqdm(values, desc=f"Sweeping {dim}", disable=not progress):
        value = _parse_value(dim, raw, scenario)
        setting = value / 2.0 if dim == "rtt" else value
        variant = scenario.updated(**{SWEEP_DIMENSIONS[dim]: setting})
        _, record = simulate(variant, mode, max_tokens, repeats)
        rows.append({dim: value, **record})
    df = pd.DataFrame(rows)
    return df[[dim] + [c for c in df.columns if c != dim]]


def compare(
    scenario: ScenarioConfig,
    modes: Iterable[Union[str, PipelineMode]] = tuple(PipelineMode),
    max_tokens: Optional[int] = None,
    repeats: int = 1,
    progress: bool = True,
) -> pd.DataFrame:
    """All modes on one scenario, with throughput speedup over the sync baseline."""
    modes = [PipelineMode.parse(m) for m in modes]
    if PipelineMode.SYNC not in modes:
        modes = [PipelineMode.SYNC] + modes
    rows = []
    for mode in tqdm(modes, desc="Comparing modes", disable=not progress):
        _, record = simulate(scenario.updated(mode=mode.value), mode, max_tokens, repeats)
        rows.append(record)
    df = pd.DataFrame(rows)
    col = "throughput" if repeats == 1 else "throughput_mean"
    baseline = float(df.loc[df["mode"] == PipelineMode.SYNC.value, col].iloc[0])
    df["speedup_vs_sync"] = df[col] / baseline
    return df


def write_transcript(path: Union[str, Path], tokens: Sequence[TokenId], scenario: ScenarioConfig, mode: str) -> Path:
    """One token id per line under a commented header carrying the config digest."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(f"# digest: {scenario.digest()}\n")
        f.write(f"# scenario: {scenario.name} mode: {mode} tokens: {len(tokens)}\n")
        for token in tokens:
            f.write(f"{token}\n")
    return path


def read_transcript(path: Union[str, Path]) -> Tuple[Optional[str], List[TokenId]]:
    digest = None
    tokens: List[TokenId] = []
    with open(path, "r") as f:
        for line in f:
            line = line.strip()
            if line.startswith("# digest:"):
                digest = line.split(":", 1)[1].strip()
            elif line and not line.startswith("#"):
                tokens.append(int(line))
    return digest, tokens

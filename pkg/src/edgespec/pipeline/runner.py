"""Simulated end-to-end runs of the edge/cloud protocol."""

import logging
from enum import Enum
from typing import TYPE_CHECKING, List, Optional, Tuple

import pandas as pd

from ..core import StreamSet, TokenId
from ..exceptions import Divergence, ScenarioError
from ..metrics import RunMetrics, collect
from ..transport import SimulatedChannel
from .clock import EventClock
from .cloud import CloudActor
from .context import SimContext
from .edge import EdgeActor
from .trace import RunTrace

if TYPE_CHECKING:
    from ..bench.scenario import ScenarioConfig

logger = logging.getLogger(__name__)


class PipelineMode(Enum):
    SYNC = "sync"
    ASYNC = "async"
    NO_FAST_VERIFY = "no-fastverify"
    NO_SPLIT_REJECTION = "no-splitrej"

    @property
    def asynchronous(self) -> bool:
        return self is not PipelineMode.SYNC

    @property
    def fast_verify(self) -> bool:
        return self in (PipelineMode.ASYNC, PipelineMode.NO_SPLIT_REJECTION)

    @property
    def dense_verdicts(self) -> bool:
        return self is PipelineMode.NO_SPLIT_REJECTION

    @classmethod
    def parse(cls, value) -> "PipelineMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError as e:
            names = ", ".join(m.value for m in cls)
            raise ScenarioError(f"unknown mode {value!r}; expected one of {names}") from e


class Simulation:
    """One edge, one cloud, one simulated channel, one virtual clock."""

    def __init__(
        self,
        scenario: "ScenarioConfig",
        mode: Optional[PipelineMode] = None,
        max_tokens: Optional[int] = None,
    ):
        self.scenario = scenario
        self.mode = PipelineMode.parse(mode if mode is not None else scenario.mode)
        self.max_tokens = max_tokens if max_tokens is not None else scenario.max_tokens
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")

        pair = scenario.build_pair()
        config = scenario.session_config()
        streams = StreamSet(config.seeds)
        K = config.V if self.mode.dense_verdicts else config.K

        self.clock = EventClock()
        self.trace = RunTrace()
        self.channel = SimulatedChannel(scenario.channel_config(), streams.network)
        edge_ctx = SimContext("edge", self.clock, self.channel, self.trace)
        cloud_ctx = SimContext("cloud", self.clock, self.channel, self.trace)

        self.edge = EdgeActor(
            edge_ctx,
            pair.draft,
            scenario.prompt,
            gamma=config.gamma,
            streams=streams,
            max_tokens=self.max_tokens,
            t_d=scenario.costs.t_d,
            asynchronous=self.mode.asynchronous,
            fast_verify=self.mode.fast_verify,
            truncation=scenario.truncation_policy(),
            cost_schedule=scenario.costs.draft_cost_schedule,
        )
        self.cloud = CloudActor(
            cloud_ctx,
            pair.target,
            scenario.prompt,
            K=K,
            accept_stream=streams.cloud_accept,
            t_v=scenario.costs.t_v,
            fast_verify=self.mode.fast_verify,
        )
        edge_ctx.peer = self.cloud
        cloud_ctx.peer = self.edge

    def run(self) -> Tuple[List[TokenId], RunMetrics]:
        logger.info(
            "simulating %s mode=%s max_tokens=%d", self.scenario.name, self.mode.value, self.max_tokens
        )
        self.cloud.start()
        self.edge.start()
        self.clock.run()
        check_convergence(self.edge.state.committed, self.cloud.state.committed)
        metrics = collect(self.trace, stale_batches=self.cloud.stale_batches)
        logger.info(
            "finished at t=%.3f ms: %d tokens, %.2f tok/s",
            self.clock.now,
            metrics.committed_tokens,
            metrics.throughput,
        )
        return self.edge.transcript(), metrics


def check_convergence(edge_committed, cloud_committed) -> None:
    if tuple(edge_committed) != tuple(cloud_committed):
        n = min(len(edge_committed), len(cloud_committed))
        first = next((i for i in range(n) if edge_committed[i] != cloud_committed[i]), n)
        raise Divergence(
            f"edge ({len(edge_committed)} tokens) and cloud ({len(cloud_committed)} tokens) "
            f"committed sequences differ from position {first}"
        )


def run(
    scenario: "ScenarioConfig",
    mode: Optional[PipelineMode] = None,
    max_tokens: Optional[int] = None,
) -> Tuple[List[TokenId], RunMetrics]:
    """
    Simulate a scenario to quiescence.

    Decoding stops at the first verdict that brings the generated length
    (seed included) to max_tokens or beyond, so the transcript may run a
    few tokens past it.

    Raises:
        Divergence: edge and cloud disagree on the committed sequence
    """
    return Simulation(scenario, mode, max_tokens).run()


def measure_bubble(trace) -> pd.DataFrame:
    """
    Per-cycle edge idle time while awaiting a verdict.

    Columns: batch_id, bubble, t_verify, pre_verified (count of positions
    verified ahead of the Draft frame), rtt.
    """
    df = trace if isinstance(trace, pd.DataFrame) else trace.to_frame()
    verdicts = df[(df["actor"] == "edge") & (df["event"] == "verdict")]
    verifies = df[(df["actor"] == "cloud") & (df["event"] == "verify")]
    out = verdicts[["batch_id", "bubble", "rtt"]].merge(
        verifies[["batch_id", "cost", "pre_verified"]], on="batch_id", how="left"
    )
    out = out.rename(columns={"cost": "t_verify"})
    out["batch_id"] = out["batch_id"].astype(int)
    out["pre_verified"] = out["pre_verified"].astype(int)
    return out.reset_index(drop=True)

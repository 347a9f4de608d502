"""Run one actor over a socket endpoint in real time."""

import asyncio
import logging
from typing import TYPE_CHECKING, Any, Callable, List, Optional, Tuple

from ..config import TIME_SCALE
from ..core import StreamSet, TokenId
from ..metrics import RunMetrics, collect
from ..transport import FrameEndpoint, handshake
from ..wire import decode
from .cloud import CloudActor
from .context import ActorContext
from .edge import EdgeActor
from .runner import PipelineMode
from .trace import RunTrace

if TYPE_CHECKING:
    from ..bench.scenario import ScenarioConfig

logger = logging.getLogger(__name__)


class LiveContext(ActorContext):
    """
    Actor context on an asyncio loop.

    One simulated millisecond lasts time_scale real seconds.
    """

    def __init__(self, role: str, endpoint: FrameEndpoint, trace: RunTrace, time_scale: float = TIME_SCALE):
        super().__init__(role, trace)
        if time_scale <= 0:
            raise ValueError("time_scale must be positive")
        self.endpoint = endpoint
        self.time_scale = time_scale
        self.loop = asyncio.get_running_loop()
        self._t0 = self.loop.time()
        self._timers: List[asyncio.TimerHandle] = []
        self.error: Optional[BaseException] = None
        self.failed = asyncio.Event()

    def now(self) -> float:
        return (self.loop.time() - self._t0) / self.time_scale

    def after(self, delay_ms: float, callback: Callable, *args: Any) -> None:
        handle = self.loop.call_later(delay_ms * self.time_scale, self._guarded, callback, args)
        self._timers.append(handle)

    def _guarded(self, callback: Callable, args) -> None:
        try:
            callback(*args)
        except Exception as e:  # surfaced by the session loop
            self.error = e
            self.failed.set()

    def transmit(self, data: bytes) -> None:
        self.endpoint.send(data)

    def cancel_timers(self) -> None:
        for handle in self._timers:
            handle.cancel()
        self._timers.clear()


async def _pump(
    endpoint: FrameEndpoint,
    ctx: LiveContext,
    actor,
    until: Optional[Callable[[], bool]] = None,
) -> None:
    """Deliver incoming frames to the actor until the peer's end marker or until()."""
    while True:
        recv = asyncio.ensure_future(endpoint.recv())
        failed = asyncio.ensure_future(ctx.failed.wait())
        try:
            done, _ = await asyncio.wait({recv, failed}, return_when=asyncio.FIRST_COMPLETED)
        finally:
            failed.cancel()
        if recv not in done:
            recv.cancel()
            raise ctx.error
        data = recv.result()
        if data is None:
            return
        actor.on_frame(decode(data))
        await endpoint.drain()
        if until is not None and until():
            return


async def run_edge(
    scenario: "ScenarioConfig",
    endpoint: FrameEndpoint,
    mode: Optional[PipelineMode] = None,
    max_tokens: Optional[int] = None,
    time_scale: float = TIME_SCALE,
) -> Tuple[List[TokenId], RunMetrics]:
    """Edge side of a socket session; returns its committed transcript and metrics."""
    mode = PipelineMode.parse(mode if mode is not None else scenario.mode)
    config = scenario.session_config()
    pair = scenario.build_pair()
    trace = RunTrace()

    await handshake(endpoint, bytes.fromhex(scenario.digest()))
    ctx = LiveContext("edge", endpoint, trace, time_scale)
    edge = EdgeActor(
        ctx,
        pair.draft,
        scenario.prompt,
        gamma=config.gamma,
        streams=StreamSet(config.seeds),
        max_tokens=max_tokens if max_tokens is not None else scenario.max_tokens,
        t_d=scenario.costs.t_d,
        asynchronous=mode.asynchronous,
        fast_verify=mode.fast_verify,
        truncation=scenario.truncation_policy(),
        cost_schedule=scenario.costs.draft_cost_schedule,
    )
    try:
        edge.start()
        await endpoint.drain()
        await _pump(endpoint, ctx, edge, until=lambda: edge.done)
        endpoint.send_end()
        await endpoint.drain()
        # wait for the cloud's end marker so every frame has been processed
        while await endpoint.recv() is not None:
            pass
    finally:
        ctx.cancel_timers()
        await endpoint.close()
    logger.info("edge session done: %d tokens", edge.generated)
    return edge.transcript(), collect(trace)


async def run_cloud(
    scenario: "ScenarioConfig",
    endpoint: FrameEndpoint,
    mode: Optional[PipelineMode] = None,
    time_scale: float = TIME_SCALE,
) -> List[TokenId]:
    """Cloud side of a socket session; returns its committed transcript."""
    mode = PipelineMode.parse(mode if mode is not None else scenario.mode)
    config = scenario.session_config()
    pair = scenario.build_pair()
    streams = StreamSet(config.seeds)

    await handshake(endpoint, bytes.fromhex(scenario.digest()))
    ctx = LiveContext("cloud", endpoint, RunTrace(), time_scale)
    cloud = CloudActor(
        ctx,
        pair.target,
        scenario.prompt,
        K=config.V if mode.dense_verdicts else config.K,
        accept_stream=streams.cloud_accept,
        t_v=scenario.costs.t_v,
        fast_verify=mode.fast_verify,
    )
    try:
        cloud.start()
        await endpoint.drain()
        await _pump(endpoint, ctx, cloud)
        endpoint.send_end()
        await endpoint.drain()
    finally:
        ctx.cancel_timers()
        await endpoint.close()
    logger.info("cloud session done: %d tokens", len(cloud.transcript()))
    return cloud.transcript()

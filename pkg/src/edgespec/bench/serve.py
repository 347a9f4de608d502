"""Two-endpoint socket sessions."""

import asyncio
import logging
from typing import List, Optional, Tuple

from ..config import TIME_SCALE
from ..core import TokenId
from ..metrics import RunMetrics
from ..pipeline import check_convergence, run_cloud, run_edge
from ..transport import Listener, connect, socket_transport
from .scenario import ScenarioConfig

logger = logging.getLogger(__name__)


async def serve(
    role: str,
    address: str,
    scenario: ScenarioConfig,
    mode: Optional[str] = None,
    max_tokens: Optional[int] = None,
    time_scale: float = TIME_SCALE,
) -> List[TokenId]:
    """Run one role of a live session; the cloud listens, the edge connects."""
    endpoint = await socket_transport(role, address)
    if role == "cloud":
        return await run_cloud(scenario, endpoint, mode, time_scale)
    transcript, _ = await run_edge(scenario, endpoint, mode, max_tokens, time_scale)
    return transcript


async def serve_loopback(
    scenario: ScenarioConfig,
    mode: Optional[str] = None,
    max_tokens: Optional[int] = None,
    time_scale: float = TIME_SCALE,
    host: str = "127.0.0.1",
    cloud_scenario: Optional[ScenarioConfig] = None,
) -> Tuple[List[TokenId], RunMetrics]:
    """
    Both roles in one event loop over a real TCP connection.

    Raises:
        Divergence: the two ends committed different sequences
        DigestMismatch: cloud_scenario differs from scenario
    """
    listener = await Listener(host, 0).start()
    accepted = asyncio.ensure_future(listener.accept())
    edge_endpoint = await connect(host, listener.port)
    cloud_endpoint = await accepted

    (edge_tokens, metrics), cloud_tokens = await asyncio.gather(
        run_edge(scenario, edge_endpoint, mode, max_tokens, time_scale),
        run_cloud(cloud_scenario or scenario, cloud_endpoint, mode, time_scale),
    )
    check_convergence(edge_tokens, cloud_tokens)
    return edge_tokens, metrics

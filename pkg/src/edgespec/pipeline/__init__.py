"""Discrete-event execution of the edge/cloud speculative decoding protocol."""

from .clock import EventClock
from .cloud import CloudActor
from .context import ActorContext, SimContext
from .edge import EdgeActor
from .live import LiveContext, run_cloud, run_edge
from .runner import PipelineMode, Simulation, check_convergence, measure_bubble, run
from .trace import RunTrace
from .truncation import TruncationPolicy

__all__ = [
    "EventClock",
    "CloudActor",
    "ActorContext",
    "SimContext",
    "EdgeActor",
    "LiveContext",
    "run_cloud",
    "run_edge",
    "PipelineMode",
    "Simulation",
    "check_convergence",
    "measure_bubble",
    "run",
    "RunTrace",
    "TruncationPolicy",
]

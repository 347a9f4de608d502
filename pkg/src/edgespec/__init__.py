"""Asynchronous edge-cloud speculative decoding: protocol, simulator and performance model."""

__version__ = "0.1.0"

from .analytics import PerfParams, report
from .bench import ScenarioConfig, load_scenario
from .metrics import RunMetrics
from .models import AlignedPair, make_aligned_pair, make_constant_alpha_pair
from .pipeline import PipelineMode, run
from .rejection import reference_decode

__all__ = [
    "PerfParams",
    "report",
    "ScenarioConfig",
    "load_scenario",
    "RunMetrics",
    "AlignedPair",
    "make_aligned_pair",
    "make_constant_alpha_pair",
    "PipelineMode",
    "run",
    "reference_decode",
]
